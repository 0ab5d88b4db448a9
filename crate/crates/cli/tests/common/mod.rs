//! Fixture helpers shared by the integration and acceptance suites.

use std::path::{Path, PathBuf};

pub struct Lcg(pub u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.wrapping_mul(2654435761).wrapping_add(1))
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next() % (1 << 24)) as f64 / (1 << 24) as f64
    }

    pub fn gauss(&mut self) -> f64 {
        (0..6).map(|_| self.uniform()).sum::<f64>() - 3.0
    }
}

/// A deliberately messy raw file: corrupted numerics ("1234_", junk, empty
/// fields), a categorical column, informative numeric columns.
pub fn messy_csv(n: usize, seed: u64) -> String {
    let mut rng = Lcg::new(seed);
    let classes = ["Poor", "Standard", "Good"];
    let jobs = ["clerk", "pilot", "nurse", "chef"];
    let mut out =
        String::from("Age,Annual_Income,Occupation,Delay_from_due_date,Num_of_Loan,Credit_Score\n");
    for _ in 0..n {
        let c = match rng.uniform() {
            u if u < 0.29 => 0usize,
            u if u < 0.82 => 1,
            _ => 2,
        };
        let age = 25 + (rng.next() % 40) as i64;
        let mut income = format!("{:.2}", 40000.0 + c as f64 * 18000.0 + rng.gauss() * 4000.0);
        match rng.next() % 20 {
            0 => income.push('_'),
            1 => income = "#garbage#".into(),
            2 => income.clear(),
            _ => {}
        }
        let job = if rng.next() % 30 == 0 {
            ""
        } else {
            jobs[(rng.next() % 4) as usize]
        };
        let delay = format!("{:.3}", c as f64 * 2.0 + rng.gauss());
        let loans = format!("{:.3}", 3.0 - c as f64 + rng.gauss());
        out.push_str(&format!(
            "{age},{income},{job},{delay},{loans},{}\n",
            classes[c]
        ));
    }
    out
}

pub fn write_fixture(dir: &Path, n: usize, seed: u64) -> PathBuf {
    let path = dir.join("raw.csv");
    std::fs::write(&path, messy_csv(n, seed)).unwrap();
    path
}

pub fn fixture_config(dir: &Path, input: &Path, compare: bool) -> PathBuf {
    let out_dir = dir.join("out");
    let config = format!(
        "input = {}\n\
         label = Credit_Score\n\
         seed = 42\n\
         output_dir = {}\n\
         test_fraction = 0.25\n\
         filter.iqr_multiplier = 3.0\n\
         resample.method = smoteenn\n\
         resample.compare = {compare}\n\
         ensemble.n_folds = 4\n\
         ensemble.meta.n_trees = 15\n\
         base.0.kind = forest\n\
         base.0.name = random_forest\n\
         base.0.n_trees = 15\n\
         base.1.kind = gbdt\n\
         base.1.name = gbdt\n\
         base.1.n_rounds = 8\n\
         base.1.max_depth = 3\n\
         base.2.kind = knn\n\
         base.2.name = knn\n\
         base.2.k = 7\n",
        input.display(),
        out_dir.display()
    );
    let path = dir.join("run.cfg");
    std::fs::write(&path, config).unwrap();
    path
}
