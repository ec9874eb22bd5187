//! Benchmark report: per-instance timings grouped into instance classes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use msp_core::solver::Verdict;

/// Class key `(m, n, K, reduce_rows)`; `K` is 0 when unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClassKey {
    pub m: usize,
    pub n: usize,
    pub k: u64,
    pub reduce: usize,
}

impl ClassKey {
    pub fn label(&self) -> String {
        let k = if self.k == 0 { "?".to_string() } else { self.k.to_string() };
        let mut s = format!("({}, {}, {})", self.m, self.n, k);
        if self.reduce > 1 {
            s.push_str(&format!("*r{}", self.reduce));
        }
        s
    }
}

/// Pulls `K<digits>` out of names like `msp_m3_n20_K100_s1.txt`.
pub fn k_from_file_name(path: &Path) -> Option<u64> {
    let stem = path.file_stem()?.to_str()?;
    stem.split('_').find_map(|part| {
        part.strip_prefix('K')
            .or_else(|| part.strip_prefix('k'))
            .and_then(|digits| digits.parse().ok())
    })
}

#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub path: PathBuf,
    pub class: ClassKey,
    pub verdict: Verdict,
    pub seconds: f64,
}

impl BenchRecord {
    /// Time counted toward averages; `None` when the instance hit the limit.
    pub fn solved_seconds(&self) -> Option<f64> {
        match self.verdict {
            Verdict::Unknown => None,
            _ => Some(self.seconds),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
}

impl BenchReport {
    pub fn classes(&self) -> BTreeMap<ClassKey, Vec<&BenchRecord>> {
        let mut map: BTreeMap<ClassKey, Vec<&BenchRecord>> = BTreeMap::new();
        for r in &self.records {
            map.entry(r.class).or_default().push(r);
        }
        map
    }

    /// Mean over solved members; `None` if every member timed out.
    pub fn class_average(records: &[&BenchRecord]) -> Option<f64> {
        let times: Vec<f64> = records.iter().filter_map(|r| r.solved_seconds()).collect();
        if times.is_empty() {
            None
        } else {
            Some(times.iter().sum::<f64>() / times.len() as f64)
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let name_width = self
            .records
            .iter()
            .map(|r| r.path.display().to_string().len())
            .max()
            .unwrap_or(8)
            .max(8);
        let _ = writeln!(out, "{:<name_width$}  {:<16}  {:<10}  {:>12}", "instance", "class", "verdict", "seconds");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{:<name_width$}  {:<16}  {:<10}  {:>12}",
                r.path.display(),
                r.class.label(),
                verdict_label(r.verdict),
                fmt_seconds(r.solved_seconds())
            );
        }
        out.push('\n');

        let classes = self.classes();
        let widest = classes.values().map(Vec::len).max().unwrap_or(0);
        let _ = write!(out, "{:<16}", "Class");
        for i in 1..=widest {
            let _ = write!(out, "  {:>12}", format!("Instance {i}"));
        }
        let _ = writeln!(out, "  {:>12}", "Average");
        for (key, members) in &classes {
            let _ = write!(out, "{:<16}", key.label());
            for i in 0..widest {
                let cell = members.get(i).map_or(String::new(), |r| fmt_seconds(r.solved_seconds()));
                let _ = write!(out, "  {cell:>12}");
            }
            let _ = writeln!(out, "  {:>12}", fmt_seconds(Self::class_average(members)));
            let unsolved = members.iter().filter(|r| r.solved_seconds().is_none()).count();
            if unsolved > 0 {
                let _ = writeln!(out, "  note: {unsolved} instance(s) hit the time limit, excluded from the average");
            }
        }
        out
    }
}

pub fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Feasible => "FEASIBLE",
        Verdict::Infeasible => "INFEASIBLE",
        Verdict::Unknown => "TIMEOUT",
    }
}

fn fmt_seconds(s: Option<f64>) -> String {
    s.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(class: ClassKey, verdict: Verdict, seconds: f64) -> BenchRecord {
        BenchRecord {
            path: PathBuf::from("x.txt"),
            class,
            verdict,
            seconds,
        }
    }

    const KEY: ClassKey = ClassKey { m: 3, n: 20, k: 100, reduce: 1 };

    #[test]
    fn average_is_arithmetic_mean() {
        let report = BenchReport {
            records: (1..=4).map(|t| record(KEY, Verdict::Feasible, t as f64)).collect(),
        };
        let classes = report.classes();
        assert_eq!(BenchReport::class_average(&classes[&KEY]), Some(2.5));
        assert_eq!(classes[&KEY].len(), 4);
    }

    #[test]
    fn timeouts_are_excluded() {
        let report = BenchReport {
            records: vec![
                record(KEY, Verdict::Feasible, 1.0),
                record(KEY, Verdict::Unknown, 100.0),
                record(KEY, Verdict::Infeasible, 3.0),
            ],
        };
        let classes = report.classes();
        assert_eq!(BenchReport::class_average(&classes[&KEY]), Some(2.0));
        let text = report.render();
        assert!(text.contains("  -"));
        assert!(text.contains("hit the time limit"));

        let all_out = BenchReport {
            records: vec![record(KEY, Verdict::Unknown, 5.0)],
        };
        assert_eq!(BenchReport::class_average(&all_out.classes()[&KEY]), None);
    }

    #[test]
    fn single_member_class() {
        let report = BenchReport {
            records: vec![record(KEY, Verdict::Feasible, 0.37)],
        };
        assert_eq!(BenchReport::class_average(&report.classes()[&KEY]), Some(0.37));
    }

    #[test]
    fn reduction_is_part_of_the_class() {
        let starred = ClassKey { reduce: 2, ..KEY };
        assert_ne!(starred, KEY);
        assert_eq!(starred.label(), "(3, 20, 100)*r2");
        assert_eq!(ClassKey { k: 0, ..KEY }.label(), "(3, 20, ?)");
    }

    #[test]
    fn k_from_names() {
        assert_eq!(k_from_file_name(Path::new("d/msp_m3_n20_K100_s1.txt")), Some(100));
        assert_eq!(k_from_file_name(Path::new("ms_03_050_002.txt")), None);
    }
}
