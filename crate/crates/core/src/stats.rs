//! Summary statistics over chord-instance valences.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use thiserror::Error;

use crate::chord::ChordCategory;
use crate::factor::Factor;

/// Two-sided 95% normal critical value.
pub const Z_95: f64 = 1.959_963_984_5;

/// Largest `min(|a|, |b|)` for which Mann-Whitney p-values are exact.
pub const EXACT_MAX_SMALL: usize = 8;

/// Work budget (cells touched) for the exact tied-rank distribution.
const EXACT_WORK_BUDGET: f64 = 2e8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("group {0:?} has no values")]
    EmptyGroup(String),
    #[error("Mann-Whitney test needs two non-empty samples")]
    EmptySample,
}

/// One chord instance with at least one sentiment word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChordValence {
    pub song_id: String,
    pub category: ChordCategory,
    pub genre: Option<String>,
    pub era: Option<String>,
    pub region: Option<String>,
    /// Mean valence of the chord's sentiment words.
    pub valence: f64,
    /// Valence of every sentiment-word occurrence behind `valence`.
    pub word_valences: Vec<f64>,
}

impl ChordValence {
    pub fn label(&self, factor: Factor) -> Option<&str> {
        match factor {
            Factor::Category => Some(self.category.name()),
            Factor::Genre => self.genre.as_deref(),
            Factor::Era => self.era.as_deref(),
            Factor::Region => self.region.as_deref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub label: String,
    pub n: usize,
    pub mean: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

impl GroupSummary {
    pub fn half_width(&self) -> f64 {
        (self.ci95_high - self.ci95_low) / 2.0
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample variance with the n-1 denominator; zero for a single value.
pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64
}

/// Mean with a normal-approximation 95% interval, `mean ± z·s/√n`.
pub fn group_summary(values: &[f64], label: &str) -> Result<GroupSummary, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptyGroup(label.to_string()));
    }
    let n = values.len();
    let m = mean(values);
    let half = Z_95 * (sample_variance(values) / n as f64).sqrt();
    Ok(GroupSummary {
        label: label.to_string(),
        n,
        mean: m,
        ci95_low: m - half,
        ci95_high: m + half,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alternative {
    /// H1: values in `a` tend to be larger than values in `b`.
    AGreater,
    BGreater,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TestMethod {
    Exact,
    Normal,
    /// Every value in both samples is identical; p is fixed at 0.5.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MannWhitney {
    /// U statistic of sample `a`.
    pub u: f64,
    pub p: f64,
    pub method: TestMethod,
}

/// Pooled sample ranks, doubled so midranks stay integral.
struct Ranking {
    /// Doubled rank of each value of `a`, then each value of `b`.
    doubled: Vec<u64>,
    /// `(doubled rank, group size)` per distinct value.
    ties: Vec<(u64, usize)>,
}

fn rank(a: &[f64], b: &[f64]) -> Ranking {
    let mut pooled: Vec<(f64, usize)> = a.iter().chain(b).copied().enumerate().map(|(i, v)| (v, i)).collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut doubled = vec![0u64; pooled.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i + 1;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        // ranks i+1..=j average to (i+1+j)/2
        let r2 = (i + 1 + j) as u64;
        for item in &pooled[i..j] {
            doubled[item.1] = r2;
        }
        ties.push((r2, j - i));
        i = j;
    }
    Ranking { doubled, ties }
}

fn u_statistic(ranking: &Ranking, n_a: usize) -> f64 {
    let r_a: u64 = ranking.doubled[..n_a].iter().sum();
    r_a as f64 / 2.0 - (n_a * (n_a + 1)) as f64 / 2.0
}

fn validate(a: &[f64], b: &[f64]) -> Result<(), StatsError> {
    if a.is_empty() || b.is_empty() {
        Err(StatsError::EmptySample)
    } else {
        Ok(())
    }
}

fn is_degenerate(ranking: &Ranking) -> bool {
    ranking.ties.len() == 1
}

fn std_normal_sf(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// Normal approximation with tie-corrected variance and a 0.5 continuity
/// correction.
pub fn mann_whitney_normal(a: &[f64], b: &[f64], alternative: Alternative) -> Result<MannWhitney, StatsError> {
    validate(a, b)?;
    let ranking = rank(a, b);
    let u = u_statistic(&ranking, a.len());
    if is_degenerate(&ranking) {
        return Ok(MannWhitney {
            u,
            p: 0.5,
            method: TestMethod::Degenerate,
        });
    }
    let (m, n) = (a.len() as f64, b.len() as f64);
    let total = m + n;
    let tie_term: f64 = ranking
        .ties
        .iter()
        .map(|&(_, t)| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let variance = m * n / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
    let mu = m * n / 2.0;
    let sd = variance.sqrt();
    let p = match alternative {
        Alternative::AGreater => std_normal_sf((u - mu - 0.5) / sd),
        Alternative::BGreater => std_normal_sf((mu - u - 0.5) / sd),
    };
    Ok(MannWhitney {
        u,
        p,
        method: TestMethod::Normal,
    })
}

/// Exact null distribution of U (as counts indexed by U) when there are no
/// ties: the coefficients of the Gaussian binomial `[m+n choose m]_q`.
fn untied_u_counts(small: usize, large: usize) -> Vec<f64> {
    let degree = small * large;
    let mut c = vec![0f64; degree + 1];
    c[0] = 1.0;
    let mut deg = 0;
    for i in 1..=small {
        // multiply by (1 - q^(large+i)), then divide by (1 - q^i)
        let shift = large + i;
        let new_deg = deg + large;
        for k in (shift..=new_deg).rev() {
            c[k] -= c[k - shift];
        }
        for k in i..=new_deg {
            c[k] += c[k - i];
        }
        deg = new_deg;
    }
    c
}

/// Exact null distribution of the doubled rank sum of a random subset of
/// size `small`, given the tie structure. Indexed by doubled rank sum.
fn tied_rank_sum_counts(ties: &[(u64, usize)], small: usize) -> Vec<f64> {
    let max_sum: u64 = {
        let mut ranks: Vec<u64> = ties
            .iter()
            .flat_map(|&(r, g)| std::iter::repeat_n(r, g.min(small)))
            .collect();
        ranks.sort_unstable_by(|x, y| y.cmp(x));
        ranks.iter().take(small).sum()
    };
    let width = max_sum as usize + 1;
    let mut dp = vec![vec![0f64; width]; small + 1];
    dp[0][0] = 1.0;
    for &(r, g) in ties {
        let r = r as usize;
        for k in (1..=small).rev() {
            let mut binom = 1.0;
            for j in 1..=g.min(k) {
                binom = binom * (g + 1 - j) as f64 / j as f64;
                let (lower, upper) = dp.split_at_mut(k);
                let src = &lower[k - j];
                let dst = &mut upper[0];
                for s in 0..width.saturating_sub(j * r) {
                    if src[s] != 0.0 {
                        dst[s + j * r] += src[s] * binom;
                    }
                }
            }
        }
    }
    dp.swap_remove(small)
}

fn exact_work(ranking: &Ranking, small: usize, large: usize) -> f64 {
    if ranking.ties.len() == small + large {
        (small * small * large) as f64
    } else {
        let total = (small + large) as f64;
        ranking.ties.len() as f64 * (small * small) as f64 * 2.0 * small as f64 * total
    }
}

/// Exact p-value by counting rank arrangements. Returns `None` when the
/// pooled samples are too large for the enumeration budget.
pub fn mann_whitney_exact(a: &[f64], b: &[f64], alternative: Alternative) -> Result<Option<MannWhitney>, StatsError> {
    validate(a, b)?;
    let ranking = rank(a, b);
    let u = u_statistic(&ranking, a.len());
    if is_degenerate(&ranking) {
        return Ok(Some(MannWhitney {
            u,
            p: 0.5,
            method: TestMethod::Degenerate,
        }));
    }
    let (n_a, n_b) = (a.len(), b.len());
    let small_is_a = n_a <= n_b;
    let (small, large) = if small_is_a { (n_a, n_b) } else { (n_b, n_a) };
    if exact_work(&ranking, small, large) > EXACT_WORK_BUDGET {
        return Ok(None);
    }
    // Tail events in terms of the smaller sample's statistic: a larger
    // U_a means a larger rank sum for a and a smaller one for b.
    let small_upper = small_is_a == (alternative == Alternative::AGreater);

    let p = if ranking.ties.len() == n_a + n_b {
        let counts = untied_u_counts(small, large);
        let u_small = if small_is_a { u } else { (n_a * n_b) as f64 - u };
        let observed = u_small.round() as usize;
        let total: f64 = counts.iter().sum();
        let tail: f64 = if small_upper {
            counts[observed..].iter().sum()
        } else {
            counts[..=observed].iter().sum()
        };
        tail / total
    } else {
        let counts = tied_rank_sum_counts(&ranking.ties, small);
        let observed: u64 = if small_is_a {
            ranking.doubled[..n_a].iter().sum()
        } else {
            ranking.doubled[n_a..].iter().sum()
        };
        let observed = observed as usize;
        let total: f64 = counts.iter().sum();
        let tail: f64 = if small_upper {
            counts[observed..].iter().sum()
        } else {
            counts[..=observed].iter().sum()
        };
        tail / total
    };
    Ok(Some(MannWhitney {
        u,
        p: p.min(1.0),
        method: TestMethod::Exact,
    }))
}

/// One-tailed Mann-Whitney U test. Exact when the smaller sample has at
/// most eight values (and the pooled size fits the enumeration budget),
/// normal approximation otherwise.
pub fn mann_whitney_one_tailed(a: &[f64], b: &[f64], alternative: Alternative) -> Result<MannWhitney, StatsError> {
    validate(a, b)?;
    if a.len().min(b.len()) <= EXACT_MAX_SMALL {
        if let Some(result) = mann_whitney_exact(a, b, alternative)? {
            return Ok(result);
        }
        log::warn!(
            "exact Mann-Whitney for sizes {}x{} exceeds the work budget; using the normal approximation",
            a.len(),
            b.len()
        );
    }
    mann_whitney_normal(a, b, alternative)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorMinorDiff {
    pub label: String,
    pub n_major: usize,
    pub n_minor: usize,
    pub mean_major: f64,
    pub mean_minor: f64,
    /// Major mean minus Minor mean.
    pub diff: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MajorMinorTable {
    pub rows: BTreeMap<String, MajorMinorDiff>,
    /// Labels lacking Major or Minor chords.
    pub skipped: Vec<String>,
}

pub fn major_minor_diff(chords: &[ChordValence], group_by: Factor) -> MajorMinorTable {
    let mut groups: BTreeMap<&str, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for c in chords {
        let Some(label) = c.label(group_by) else { continue };
        let entry = groups.entry(label).or_default();
        match c.category {
            ChordCategory::Major => entry.0.push(c.valence),
            ChordCategory::Minor => entry.1.push(c.valence),
            _ => {}
        }
    }
    let mut table = MajorMinorTable::default();
    for (label, (major, minor)) in groups {
        if major.is_empty() || minor.is_empty() {
            log::warn!("{group_by} {label:?}: needs both Major and Minor chords, skipped");
            table.skipped.push(label.to_string());
            continue;
        }
        let (mj, mn) = (mean(&major), mean(&minor));
        let se = (sample_variance(&major) / major.len() as f64 + sample_variance(&minor) / minor.len() as f64).sqrt();
        let diff = mj - mn;
        table.rows.insert(
            label.to_string(),
            MajorMinorDiff {
                label: label.to_string(),
                n_major: major.len(),
                n_minor: minor.len(),
                mean_major: mj,
                mean_minor: mn,
                diff,
                ci95_low: diff - Z_95 * se,
                ci95_high: diff + Z_95 * se,
            },
        );
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prevalence {
    pub count: usize,
    pub proportion: f64,
}

/// Share of each chord category within each group (a single group labelled
/// `all` when `group_by` is `None`).
pub fn category_prevalence(
    chords: &[ChordValence],
    group_by: Option<Factor>,
) -> BTreeMap<(String, ChordCategory), Prevalence> {
    let mut counts: BTreeMap<(String, ChordCategory), usize> = BTreeMap::new();
    let mut totals: BTreeMap<String, usize> = BTreeMap::new();
    for c in chords {
        let label = match group_by {
            None => "all",
            Some(f) => match c.label(f) {
                Some(l) => l,
                None => continue,
            },
        };
        *counts.entry((label.to_string(), c.category)).or_default() += 1;
        *totals.entry(label.to_string()).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|((label, cat), count)| {
            let proportion = count as f64 / totals[&label] as f64;
            ((label, cat), Prevalence { count, proportion })
        })
        .collect()
}

/// Valence of one group measured per chord and per sentiment word.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValenceRow {
    pub chord: GroupSummary,
    pub word: GroupSummary,
}

/// Per-label chord-level and word-level valence summaries. Labels rejected
/// by `keep` are left out.
pub fn valence_by(chords: &[ChordValence], factor: Factor, keep: impl Fn(&str) -> bool) -> Vec<ValenceRow> {
    let mut groups: BTreeMap<&str, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for c in chords {
        let Some(label) = c.label(factor) else { continue };
        if !keep(label) {
            continue;
        }
        let entry = groups.entry(label).or_default();
        entry.0.push(c.valence);
        entry.1.extend_from_slice(&c.word_valences);
    }
    groups
        .into_iter()
        .map(|(label, (chord_vals, word_vals))| ValenceRow {
            chord: group_summary(&chord_vals, label).expect("groups are non-empty"),
            word: group_summary(&word_vals, label).expect("chords carry sentiment words"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chord(cat: ChordCategory, genre: Option<&str>, valence: f64) -> ChordValence {
        ChordValence {
            song_id: "s".into(),
            category: cat,
            genre: genre.map(str::to_string),
            era: None,
            region: None,
            valence,
            word_valences: vec![valence],
        }
    }

    // Brute-force exact p: enumerate every subset of pooled positions.
    fn enumerate_p(a: &[f64], b: &[f64], alt: Alternative) -> f64 {
        let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
        let n = pooled.len();
        let rank_of = |v: f64| {
            let below = pooled.iter().filter(|&&x| x < v).count() as f64;
            let equal = pooled.iter().filter(|&&x| x == v).count() as f64;
            below + (equal + 1.0) / 2.0
        };
        let ranks: Vec<f64> = pooled.iter().map(|&v| rank_of(v)).collect();
        let m = a.len();
        let observed: f64 = ranks[..m].iter().sum();
        let (mut hits, mut total) = (0u64, 0u64);
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != m {
                continue;
            }
            let s: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ranks[i]).sum();
            total += 1;
            let hit = match alt {
                Alternative::AGreater => s >= observed - 1e-9,
                Alternative::BGreater => s <= observed + 1e-9,
            };
            hits += hit as u64;
        }
        hits as f64 / total as f64
    }

    #[test]
    fn summary_examples() {
        let s = group_summary(&[5.0, 5.0, 5.0], "x").unwrap();
        assert_eq!((s.mean, s.ci95_low, s.ci95_high), (5.0, 5.0, 5.0));
        let s = group_summary(&[4.0, 6.0], "x").unwrap();
        // n-1 denominator: s = sqrt(2), so the half-width is z * sqrt(2) / sqrt(2)
        assert_eq!(s.mean, 5.0);
        assert!((s.half_width() - Z_95).abs() < 1e-12);
        let single = group_summary(&[3.5], "x").unwrap();
        assert_eq!((single.ci95_low, single.ci95_high), (3.5, 3.5));
        assert_eq!(group_summary(&[], "g"), Err(StatsError::EmptyGroup("g".into())));
    }

    #[test]
    fn exact_small_case() {
        let r = mann_whitney_one_tailed(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0], Alternative::AGreater).unwrap();
        assert_eq!(r.method, TestMethod::Exact);
        assert_eq!(r.u, 9.0);
        assert!((r.p - 0.05).abs() < 1e-12);
        let r = mann_whitney_one_tailed(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0], Alternative::BGreater).unwrap();
        assert!((r.p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_samples() {
        let a = [1.0, 2.0, 2.0, 5.0];
        for alt in [Alternative::AGreater, Alternative::BGreater] {
            assert!(mann_whitney_one_tailed(&a, &a, alt).unwrap().p >= 0.5);
            assert!(mann_whitney_normal(&a, &a, alt).unwrap().p >= 0.5);
        }
        let r = mann_whitney_one_tailed(&[2.0; 3], &[2.0; 20], Alternative::AGreater).unwrap();
        assert_eq!(r.method, TestMethod::Degenerate);
        assert_eq!(r.p, 0.5);
        assert_eq!(
            mann_whitney_one_tailed(&[], &[1.0], Alternative::AGreater),
            Err(StatsError::EmptySample)
        );
    }

    #[test]
    fn exact_matches_enumeration_with_ties() {
        let cases: [(&[f64], &[f64]); 4] = [
            (&[1.0, 2.0, 2.0, 3.0], &[2.0, 3.0, 3.0, 4.0, 5.0]),
            (&[7.0], &[7.0, 1.0, 9.0]),
            (&[1.0, 1.0, 1.0], &[1.0, 2.0]),
            (
                &[3.0, 8.0, 8.0, 8.0, 2.0, 6.0],
                &[8.0, 1.0, 6.0, 6.0, 2.0, 0.5, 4.0, 8.0],
            ),
        ];
        for (a, b) in cases {
            for alt in [Alternative::AGreater, Alternative::BGreater] {
                let got = mann_whitney_exact(a, b, alt).unwrap().unwrap().p;
                assert!((got - enumerate_p(a, b, alt)).abs() < 1e-12, "{a:?} {b:?} {alt:?}");
                let swapped = mann_whitney_exact(b, a, alt).unwrap().unwrap().p;
                let flip = match alt {
                    Alternative::AGreater => Alternative::BGreater,
                    Alternative::BGreater => Alternative::AGreater,
                };
                assert!((swapped - enumerate_p(a, b, flip)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn untied_large_side_uses_exact() {
        let a: Vec<f64> = (0..5).map(|i| 1000.0 + i as f64).collect();
        let b: Vec<f64> = (0..2000).map(|i| i as f64 * 0.37).collect();
        let r = mann_whitney_one_tailed(&a, &b, Alternative::AGreater).unwrap();
        assert_eq!(r.method, TestMethod::Exact);
        // a holds the top five ranks: p = 1 / C(2005, 5)
        let c: f64 = (0..5).map(|i| (2005 - i) as f64 / (i + 1) as f64).product();
        assert!((r.p * c - 1.0).abs() < 1e-6);
    }

    #[test]
    fn large_samples_use_normal() {
        let a: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..30).map(|i| i as f64 + 0.5).collect();
        assert_eq!(
            mann_whitney_one_tailed(&a, &b, Alternative::AGreater).unwrap().method,
            TestMethod::Normal
        );
    }

    #[test]
    fn major_minor() {
        let chords = vec![
            chord(ChordCategory::Major, Some("Rock"), 7.0),
            chord(ChordCategory::Major, Some("Rock"), 7.0),
            chord(ChordCategory::Minor, Some("Rock"), 3.0),
            chord(ChordCategory::Minor, Some("Rock"), 3.0),
            chord(ChordCategory::Major, Some("Jazz"), 8.0),
            chord(ChordCategory::Major7, Some("Jazz"), 2.0),
        ];
        let t = major_minor_diff(&chords, Factor::Genre);
        let rock = &t.rows["Rock"];
        assert_eq!(rock.diff, 4.0);
        assert_eq!((rock.ci95_low, rock.ci95_high), (4.0, 4.0));
        assert_eq!(t.skipped, vec!["Jazz".to_string()]);
    }

    #[test]
    fn prevalence() {
        let mut chords: Vec<ChordValence> = (0..3).map(|_| chord(ChordCategory::Major, None, 7.0)).collect();
        chords.push(chord(ChordCategory::Minor, None, 2.0));
        let p = category_prevalence(&chords, None);
        assert_eq!(p[&("all".to_string(), ChordCategory::Major)].proportion, 0.75);
        assert_eq!(p[&("all".to_string(), ChordCategory::Minor)].proportion, 0.25);
        assert!(category_prevalence(&[], None).is_empty());
        // chords without a genre are not counted under any genre
        assert!(category_prevalence(&chords, Some(Factor::Genre)).is_empty());
    }

    proptest! {
        #[test]
        fn prevalence_sums_to_one(cats in prop::collection::vec((0usize..9, 0usize..3), 1..60)) {
            let genres = ["a", "b", "c"];
            let chords: Vec<ChordValence> = cats
                .iter()
                .map(|&(c, g)| chord(ChordCategory::ALL[c], Some(genres[g]), 5.0))
                .collect();
            let p = category_prevalence(&chords, Some(Factor::Genre));
            let mut sums: BTreeMap<&str, f64> = BTreeMap::new();
            for ((label, _), v) in &p {
                *sums.entry(label.as_str()).or_default() += v.proportion;
            }
            for s in sums.values() {
                prop_assert!((s - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn shift_invariance(
            a in prop::collection::vec(0.0f64..9.0, 1..15),
            b in prop::collection::vec(0.0f64..9.0, 1..15),
            shift in -3i32..3,
        ) {
            // integer shifts keep floating-point ties intact
            let c = shift as f64;
            let mut chords = Vec::new();
            for &v in &a { chords.push(chord(ChordCategory::Major, Some("g"), v)); }
            for &v in &b { chords.push(chord(ChordCategory::Minor, Some("g"), v)); }
            let shifted: Vec<ChordValence> = chords.iter().map(|ch| ChordValence { valence: ch.valence + c, ..ch.clone() }).collect();
            let d0 = &major_minor_diff(&chords, Factor::Genre).rows["g"];
            let d1 = &major_minor_diff(&shifted, Factor::Genre).rows["g"];
            prop_assert!((d0.diff - d1.diff).abs() < 1e-9);
            let s0 = group_summary(&a, "a").unwrap();
            let a1: Vec<f64> = a.iter().map(|v| v + c).collect();
            let s1 = group_summary(&a1, "a").unwrap();
            prop_assert!((s1.mean - s0.mean - c).abs() < 1e-9);
            let b1: Vec<f64> = b.iter().map(|v| v + c).collect();
            let p0 = mann_whitney_one_tailed(&a, &b, Alternative::AGreater).unwrap();
            let p1 = mann_whitney_one_tailed(&a1, &b1, Alternative::AGreater).unwrap();
            prop_assert!((p0.p - p1.p).abs() < 1e-12);
        }

        #[test]
        fn exact_agrees_with_enumeration(
            a in prop::collection::vec(0u8..6, 1..7),
            b in prop::collection::vec(0u8..6, 1..7),
        ) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            for alt in [Alternative::AGreater, Alternative::BGreater] {
                let got = mann_whitney_exact(&a, &b, alt).unwrap().unwrap();
                if got.method == TestMethod::Exact {
                    prop_assert!((got.p - enumerate_p(&a, &b, alt)).abs() < 1e-12);
                }
            }
        }
    }
}
