//! Dataset loaders, outlier injection, splitting and synthetic problems.
//!
//! File formats:
//!
//! * breast cancer: UCI `breast-cancer-wisconsin.data`, 11 comma-separated
//!   fields (id, nine features in 1..=10, class 2/4), `?` marks a missing value
//! * Pima: 9 comma-separated numeric fields (eight features, 0/1 outcome),
//!   optional header line
//! * Movielens: `u.data`, `user \t item \t rating \t timestamp`

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::Path;

use log::info;
use rand::seq::index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix, DenseVector};
use crate::objectives::{MatrixCompletionObjective, Objective, QuadraticObjective};
use crate::oracles::{self, ConstraintSet};
use crate::point::Point;

pub const BREAST_CANCER_FEATURES: [&str; 9] = [
    "clump_thickness",
    "uniformity_cell_size",
    "uniformity_cell_shape",
    "marginal_adhesion",
    "single_epithelial_cell_size",
    "bare_nuclei",
    "bland_chromatin",
    "normal_nucleoli",
    "mitoses",
];

#[derive(Clone, Debug)]
pub struct TabularDataset {
    pub features: DenseMatrix,
    pub targets: Vec<f64>,
    pub feature_names: Vec<String>,
    /// Preprocessing decisions applied while loading.
    pub notes: Vec<String>,
}

impl TabularDataset {
    pub fn rows(&self) -> usize {
        self.features.rows()
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

pub fn load_breast_cancer(path: impl AsRef<Path>) -> Result<TabularDataset> {
    parse_breast_cancer(&fs::read_to_string(path)?)
}

/// Drops the id, maps class 2 → −1 and 4 → +1, imputes `?` with the column
/// median of the observed values and divides features by 10.
pub fn parse_breast_cancer(text: &str) -> Result<TabularDataset> {
    let mut rows: Vec<[Option<f64>; 9]> = Vec::new();
    let mut labels = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 11 {
            return Err(parse_err(lineno, format!("expected 11 fields, found {}", fields.len())));
        }
        let mut feats = [None; 9];
        for (slot, raw) in feats.iter_mut().zip(&fields[1..10]) {
            if *raw == "?" {
                continue;
            }
            let v: f64 = raw.parse().map_err(|_| parse_err(lineno, format!("bad feature value {raw:?}")))?;
            if !v.is_finite() {
                return Err(parse_err(lineno, format!("non-finite feature value {raw:?}")));
            }
            *slot = Some(v);
        }
        let label = match fields[10] {
            "2" => -1.0,
            "4" => 1.0,
            other => return Err(parse_err(lineno, format!("class must be 2 or 4, found {other:?}"))),
        };
        rows.push(feats);
        labels.push(label);
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let mut medians = [0.0; 9];
    let mut missing = 0usize;
    for (j, med) in medians.iter_mut().enumerate() {
        let mut present: Vec<f64> = rows.iter().filter_map(|r| r[j]).collect();
        missing += rows.len() - present.len();
        if present.is_empty() {
            return Err(parse_err(0, format!("column {} has no observed values", BREAST_CANCER_FEATURES[j])));
        }
        *med = median(&mut present);
    }
    let m = rows.len();
    let features = DenseMatrix::from_fn(m, 9, |i, j| rows[i][j].unwrap_or(medians[j]) / 10.0);
    let mut notes = vec![format!("loaded {m} rows")];
    if missing > 0 {
        notes.push(format!("imputed {missing} missing values with column medians"));
    }
    info!("breast cancer: {}", notes.join("; "));
    Ok(TabularDataset {
        features,
        targets: labels,
        feature_names: BREAST_CANCER_FEATURES.iter().map(|s| s.to_string()).collect(),
        notes,
    })
}

pub fn load_pima(path: impl AsRef<Path>) -> Result<TabularDataset> {
    parse_pima(&fs::read_to_string(path)?, true)
}

/// Parses the Pima file; with `standardize` each feature column is shifted and
/// scaled to zero mean and unit (population) variance, constant columns to zero.
pub fn parse_pima(text: &str, standardize: bool) -> Result<TabularDataset> {
    let mut names: Vec<String> = (0..8).map(|j| format!("x{j}")).collect();
    let mut data: Vec<f64> = Vec::new();
    let mut targets = Vec::new();
    let mut first = true;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Vec<Option<f64>> = fields.iter().map(|f| f.parse::<f64>().ok()).collect();
        if first && parsed.iter().any(Option::is_none) {
            first = false;
            if fields.len() == 9 {
                names = fields[..8].iter().map(|s| s.to_string()).collect();
            }
            continue;
        }
        first = false;
        if fields.len() != 9 {
            return Err(parse_err(lineno, format!("expected 9 fields, found {}", fields.len())));
        }
        let mut row = Vec::with_capacity(9);
        for (f, p) in fields.iter().zip(&parsed) {
            match p {
                Some(v) if v.is_finite() => row.push(*v),
                _ => return Err(parse_err(lineno, format!("bad numeric value {f:?}"))),
            }
        }
        targets.push(row[8]);
        data.extend_from_slice(&row[..8]);
    }
    let m = targets.len();
    if m == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut features = DenseMatrix::from_vec_unchecked(m, 8, data);
    let mut notes = vec![format!("loaded {m} rows")];
    if standardize {
        for j in 0..8 {
            let mean = (0..m).map(|i| features.get(i, j)).sum::<f64>() / m as f64;
            let var = (0..m).map(|i| (features.get(i, j) - mean).powi(2)).sum::<f64>() / m as f64;
            let sd = var.sqrt();
            for i in 0..m {
                let v = if sd > 0.0 { (features.get(i, j) - mean) / sd } else { 0.0 };
                features.set(i, j, v);
            }
        }
        notes.push("standardized features to zero mean and unit variance".into());
    }
    info!("pima: {}", notes.join("; "));
    Ok(TabularDataset { features, targets, feature_names: names, notes })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rating {
    pub user: usize,
    pub item: usize,
    pub rating: f64,
}

/// Ratings with 0-based dense user/item indices.
#[derive(Clone, Debug, PartialEq)]
pub struct RatingDataset {
    pub triples: Vec<Rating>,
    pub n_users: usize,
    pub n_items: usize,
    pub max_rating: f64,
}

impl RatingDataset {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Observed fraction of the `n_items × n_users` grid.
    pub fn density(&self) -> f64 {
        self.triples.len() as f64 / (self.n_users as f64 * self.n_items as f64)
    }

    /// Matrix shape used for completion: items index rows, users index columns.
    pub fn matrix_shape(&self) -> (usize, usize) {
        (self.n_items, self.n_users)
    }

    pub fn completion_objective(&self, delta: f64) -> Result<MatrixCompletionObjective> {
        let observed = self.triples.iter().map(|t| (t.item, t.user, t.rating)).collect();
        MatrixCompletionObjective::new(observed, self.matrix_shape(), delta)
    }

    /// `u.data` text with 1-based ids and a zero timestamp.
    pub fn to_udata(&self) -> String {
        let mut out = String::with_capacity(self.triples.len() * 16);
        for t in &self.triples {
            out.push_str(&format!("{}\t{}\t{}\t0\n", t.user + 1, t.item + 1, t.rating));
        }
        out
    }
}

pub fn load_movielens(path: impl AsRef<Path>) -> Result<RatingDataset> {
    parse_movielens(&fs::read_to_string(path)?)
}

pub fn parse_movielens(text: &str) -> Result<RatingDataset> {
    let mut raw: Vec<(u64, u64, f64)> = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(parse_err(lineno, format!("expected 4 fields, found {}", fields.len())));
        }
        let user: u64 = fields[0].parse().map_err(|_| parse_err(lineno, format!("bad user id {:?}", fields[0])))?;
        let item: u64 = fields[1].parse().map_err(|_| parse_err(lineno, format!("bad item id {:?}", fields[1])))?;
        let rating: f64 = fields[2].parse().map_err(|_| parse_err(lineno, format!("bad rating {:?}", fields[2])))?;
        if !rating.is_finite() {
            return Err(parse_err(lineno, "non-finite rating"));
        }
        fields[3].parse::<i64>().map_err(|_| parse_err(lineno, format!("bad timestamp {:?}", fields[3])))?;
        if !seen.insert((user, item)) {
            return Err(Error::DuplicateRating { user, item });
        }
        raw.push((user, item, rating));
    }
    if raw.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let dense =
        |ids: BTreeSet<u64>| -> HashMap<u64, usize> { ids.into_iter().enumerate().map(|(i, id)| (id, i)).collect() };
    let users = dense(raw.iter().map(|r| r.0).collect());
    let items = dense(raw.iter().map(|r| r.1).collect());
    let triples: Vec<Rating> =
        raw.iter().map(|&(u, i, r)| Rating { user: users[&u], item: items[&i], rating: r }).collect();
    let max_rating = triples.iter().map(|t| t.rating).fold(f64::NEG_INFINITY, f64::max);
    Ok(RatingDataset { triples, n_users: users.len(), n_items: items.len(), max_rating })
}

fn check_fraction(name: &str, f: f64) -> Result<()> {
    if (0.0..=1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must lie in [0, 1], got {f}")))
    }
}

/// Indices of the `round(fraction · n)` triples chosen for corruption, sorted.
pub fn select_outliers(n: usize, fraction: f64, seed: u64) -> Result<Vec<usize>> {
    check_fraction("outlier fraction", fraction)?;
    let count = ((fraction * n as f64).round() as usize).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, n, count).into_vec();
    picked.sort_unstable();
    Ok(picked)
}

/// Sets a seeded uniform subset of observed ratings to `max_rating`.
pub fn inject_outliers(ds: &RatingDataset, fraction: f64, seed: u64) -> Result<RatingDataset> {
    let mut out = ds.clone();
    for i in select_outliers(ds.len(), fraction, seed)? {
        out.triples[i].rating = ds.max_rating;
    }
    Ok(out)
}

/// Seeded uniform split; each side keeps the original order and the full matrix shape.
pub fn train_test_split(ds: &RatingDataset, train_fraction: f64, seed: u64) -> Result<(RatingDataset, RatingDataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!("train fraction must lie in (0, 1), got {train_fraction}")));
    }
    let n = ds.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let n_train = (train_fraction * n as f64).round() as usize;
    let mut in_train = vec![false; n];
    for &i in &order[..n_train] {
        in_train[i] = true;
    }
    let (mut train, mut test) = (Vec::with_capacity(n_train), Vec::with_capacity(n - n_train));
    for (t, flag) in ds.triples.iter().zip(in_train) {
        if flag {
            train.push(*t);
        } else {
            test.push(*t);
        }
    }
    let with = |triples| RatingDataset { triples, ..ds.clone() };
    Ok((with(train), with(test)))
}

/// Quadratic test problem over an L2 ball with known constants.
#[derive(Clone, Debug)]
pub struct SyntheticProblem {
    pub objective: QuadraticObjective,
    pub set: ConstraintSet,
    pub optimum: Point,
    pub f_star: f64,
    /// Smoothness constant, the largest eigenvalue of the Hessian.
    pub smoothness: f64,
    pub diameter: f64,
}

/// `f(x) = ½ (x − x_u)ᵀ Q (x − x_u)` with Hessian eigenvalues log-spaced in
/// `[1, condition]` and a random orthogonal eigenbasis.
///
/// With `interior` the unconstrained minimizer `x_u` is placed inside the ball
/// and is the constrained optimum. Otherwise it is placed outside and the
/// optimum `x(μ) = −(Q + μI)⁻¹ c` on the boundary is found by bisection on `μ`.
pub fn synth_quadratic(d: usize, condition: f64, radius: f64, interior: bool, seed: u64) -> Result<SyntheticProblem> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if !(condition >= 1.0 && condition.is_finite()) {
        return Err(Error::InvalidArgument(format!("condition must be >= 1, got {condition}")));
    }
    let set = ConstraintSet::l2(radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let eig: Vec<f64> = if d == 1 {
        vec![condition]
    } else {
        (0..d).map(|i| (condition.ln() * i as f64 / (d - 1) as f64).exp()).collect()
    };
    let v = linalg::random_orthogonal(d, rng.gen());
    let q = v.matmul(&DenseMatrix::from_diag(&eig))?.matmul(&v.transpose())?;
    let q = DenseMatrix::from_fn(d, d, |i, j| 0.5 * (q.get(i, j) + q.get(j, i)));

    let dir: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let dn = linalg::norm2(&dir);
    let scale = if interior { rng.gen_range(0.2..0.8) } else { rng.gen_range(1.5..3.0) } * radius;
    let x_u: Vec<f64> = dir.iter().map(|x| x / dn * scale).collect();
    let qx = q.matvec(&x_u);
    let c: Vec<f64> = qx.iter().map(|v| -v).collect();
    let offset = 0.5 * linalg::dot(&x_u, &qx);
    let objective = QuadraticObjective::new(q, DenseVector::from_vec_unchecked(c.clone()), offset)?;

    let optimum = if interior {
        x_u
    } else {
        // ‖x(μ)‖ is decreasing in μ; coordinates in the eigenbasis
        let c_hat = v.matvec_t(&c);
        let norm_at = |mu: f64| c_hat.iter().zip(&eig).map(|(ci, l)| (ci / (l + mu)).powi(2)).sum::<f64>().sqrt();
        let (mut lo, mut hi) = (0.0, 1.0);
        while norm_at(hi) > radius {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if norm_at(mid) > radius {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        let mu = 0.5 * (lo + hi);
        let coords: Vec<f64> = c_hat.iter().zip(&eig).map(|(ci, l)| -ci / (l + mu)).collect();
        let x = v.matvec(&coords);
        let n = linalg::norm2(&x);
        x.into_iter().map(|xi| xi * radius / n).collect()
    };
    let optimum = Point::Vector(DenseVector::from_vec_unchecked(optimum));
    let f_star = objective.value(&optimum)?;
    Ok(SyntheticProblem { objective, diameter: oracles::diameter(&set), set, optimum, f_star, smoothness: eig[d - 1] })
}
