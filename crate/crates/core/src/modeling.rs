//! Linear models of chord valence on categorical factors.
//!
//! Each included factor is dummy coded against its most frequent level.
//! Rows missing a label for any included factor are dropped (listwise
//! deletion), so models over different factor sets may see different rows.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::factor::{join_factors, Factor};
use crate::metadata::LevelFilter;
use crate::stats::ChordValence;

/// Relative threshold on |R_ii| below which a design is rank deficient.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("no rows remain after dropping rows with missing labels")]
    NoRowsRemain,
    #[error("design matrix is rank deficient")]
    RankDeficient,
    #[error("response is constant; variance explained is undefined")]
    ConstantResponse,
    #[error("no candidate factors")]
    NoCandidates,
}

#[derive(Debug, Clone)]
pub struct DesignMatrix {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    /// `intercept`, then `factor=level` per dummy column.
    pub columns: Vec<String>,
    pub factors: Vec<Factor>,
    /// Reference level per factor.
    pub reference_levels: BTreeMap<Factor, String>,
    pub dropped_rows: usize,
    /// Columns removed for being constant or duplicating an earlier column.
    pub pruned: Vec<String>,
}

impl DesignMatrix {
    pub fn n(&self) -> usize {
        self.y.len()
    }
}

/// Whether `c` has a usable label for every factor in `factors`.
fn row_labels<'a>(c: &'a ChordValence, factors: &[Factor], filter: &LevelFilter) -> Option<Vec<&'a str>> {
    factors
        .iter()
        .map(|&f| c.label(f).filter(|l| filter.allows(f, l)))
        .collect()
}

pub fn build_design(
    chords: &[ChordValence],
    factors: &[Factor],
    filter: &LevelFilter,
) -> Result<DesignMatrix, ModelError> {
    let factors: Vec<Factor> = {
        let set: BTreeSet<Factor> = factors.iter().copied().collect();
        set.into_iter().collect()
    };
    let rows: Vec<(&ChordValence, Vec<&str>)> = chords
        .iter()
        .filter_map(|c| row_labels(c, &factors, filter).map(|labels| (c, labels)))
        .collect();
    let dropped_rows = chords.len() - rows.len();
    if rows.is_empty() {
        return Err(ModelError::NoRowsRemain);
    }
    let n = rows.len();

    let mut columns = vec!["intercept".to_string()];
    let mut data: Vec<Vec<f64>> = vec![vec![1.0; n]];
    let mut reference_levels = BTreeMap::new();
    let mut pruned = Vec::new();

    for (fi, &factor) in factors.iter().enumerate() {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for (_, labels) in &rows {
            *counts.entry(labels[fi]).or_default() += 1;
        }
        let reference = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(l, _)| *l)
            .expect("rows are non-empty");
        reference_levels.insert(factor, reference.to_string());
        for &level in counts.keys().filter(|l| **l != reference) {
            let name = format!("{factor}={level}");
            let col: Vec<f64> = rows.iter().map(|(_, labels)| f64::from(labels[fi] == level)).collect();
            // a dummy is constant only if it is all zeros (all ones would make the level the reference)
            if col.iter().all(|v| *v == col[0]) || data.contains(&col) {
                log::warn!("pruning degenerate design column {name}");
                pruned.push(name);
                continue;
            }
            columns.push(name);
            data.push(col);
        }
    }

    let p = data.len();
    let x = DMatrix::from_fn(n, p, |i, j| data[j][i]);
    let y = DVector::from_iterator(n, rows.iter().map(|(c, _)| c.valence));
    Ok(DesignMatrix {
        x,
        y,
        columns,
        factors,
        reference_levels,
        dropped_rows,
        pruned,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub coefficients: Vec<f64>,
    pub rss: f64,
    pub tss: f64,
    pub n: usize,
    /// Fitted coefficients, intercept included.
    pub k: usize,
    /// `n ln(rss / n) + 2 (k + 1)`; the extra parameter is the error variance.
    pub aic: f64,
}

pub fn aic(rss: f64, n: usize, k: usize) -> f64 {
    let n_f = n as f64;
    n_f * (rss / n_f).ln() + 2.0 * (k as f64 + 1.0)
}

/// Least squares through a Householder QR decomposition.
pub fn ols_fit(design: &DesignMatrix) -> Result<FitResult, ModelError> {
    let (n, k) = design.x.shape();
    if n < k {
        return Err(ModelError::RankDeficient);
    }
    let qr = design.x.clone().qr();
    let r = qr.r();
    let max_diag = (0..k).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if max_diag == 0.0 || (0..k).any(|i| r[(i, i)].abs() <= RANK_TOLERANCE * max_diag) {
        return Err(ModelError::RankDeficient);
    }
    let qty = qr.q().transpose() * &design.y;
    let beta = r.solve_upper_triangular(&qty).ok_or(ModelError::RankDeficient)?;
    let residuals = &design.y - &design.x * &beta;
    let rss = residuals.norm_squared();
    let mean = design.y.mean();
    let tss = design.y.iter().map(|v| (v - mean).powi(2)).sum();
    Ok(FitResult {
        coefficients: beta.iter().copied().collect(),
        rss,
        tss,
        n,
        k,
        aic: aic(rss, n, k),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceExplained {
    pub factor: Factor,
    pub r2: f64,
    pub n: usize,
}

/// Share of valence variance explained by `factor` alone:
/// `1 - var(residuals) / var(response)`.
pub fn variance_explained(
    chords: &[ChordValence],
    factor: Factor,
    filter: &LevelFilter,
) -> Result<VarianceExplained, ModelError> {
    let design = build_design(chords, &[factor], filter)?;
    let fit = ols_fit(&design)?;
    if fit.tss == 0.0 {
        return Err(ModelError::ConstantResponse);
    }
    // Residuals have zero mean with an intercept, so the variance ratio is rss / tss.
    let r2 = (1.0 - fit.rss / fit.tss).clamp(0.0, 1.0);
    Ok(VarianceExplained { factor, r2, n: fit.n })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AicStep {
    pub step: usize,
    pub factors: Vec<Factor>,
    pub aic: f64,
    pub n: usize,
}

impl AicStep {
    pub fn label(&self) -> String {
        join_factors(&self.factors)
    }
}

fn fit_factors(chords: &[ChordValence], factors: &[Factor], filter: &LevelFilter) -> Result<FitResult, ModelError> {
    ols_fit(&build_design(chords, factors, filter)?)
}

/// Forward selection: start from the intercept-only model and at each step
/// add the remaining factor giving the lowest AIC, until every candidate is
/// in. Candidate ties go to the earlier factor in `Factor::ALL` order.
pub fn greedy_aic(
    chords: &[ChordValence],
    candidates: &[Factor],
    filter: &LevelFilter,
) -> Result<Vec<AicStep>, ModelError> {
    let mut remaining: Vec<Factor> = candidates
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if remaining.is_empty() {
        return Err(ModelError::NoCandidates);
    }
    let base = fit_factors(chords, &[], filter)?;
    let mut trace = vec![AicStep {
        step: 0,
        factors: Vec::new(),
        aic: base.aic,
        n: base.n,
    }];
    let mut chosen: Vec<Factor> = Vec::new();
    while !remaining.is_empty() {
        let mut best: Option<(usize, FitResult)> = None;
        for (i, &f) in remaining.iter().enumerate() {
            let mut factors = chosen.clone();
            factors.push(f);
            let fit = fit_factors(chords, &factors, filter)?;
            if best.as_ref().is_none_or(|(_, b)| fit.aic < b.aic) {
                best = Some((i, fit));
            }
        }
        let (i, fit) = best.expect("remaining is non-empty");
        chosen.push(remaining.remove(i));
        trace.push(AicStep {
            step: trace.len(),
            factors: chosen.clone(),
            aic: fit.aic,
            n: fit.n,
        });
    }
    Ok(trace)
}

/// Rows usable by every candidate factor, so all models share one n.
pub fn common_rows(chords: &[ChordValence], candidates: &[Factor], filter: &LevelFilter) -> Vec<ChordValence> {
    chords
        .iter()
        .filter(|c| row_labels(c, candidates, filter).is_some())
        .cloned()
        .collect()
}
