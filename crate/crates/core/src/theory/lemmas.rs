//! Grid checkers for the progress-distribution inequalities.
//!
//! Each checker evaluates exact probabilities (log space, with a rational
//! re-check of near-tight points when `n <= 200`) against the closed-form
//! bound at every grid point and returns a [`LemmaReport`].

use std::f64::consts::{LN_2, SQRT_2};

use num_bigint::BigUint;
use num_traits::Pow;
use rayon::prelude::*;

use super::bounds::{coupon_bound, expected_max_bound, n_star};
use super::numeric::{ln_add, BinomialTable, LnFactorials};
use super::pmf::{delta0_with, hypergeom_numerator, ln_hypergeom, ProgressParams, EXACT_MAX_N};
use super::report::{LemmaReport, Point, Tally};
use crate::error::{domain, Result};

/// Largest `n` for the full-grid checkers.
pub const FULL_GRID_MAX_N: usize = 512;

/// `e^η` and `D` of the exponential-moment chain for single-step progress.
pub const MGF_EXP_ETA: f64 = 4.0 / 3.0;
pub fn mgf_d() -> f64 {
    9.0 + 6.0 * SQRT_2
}
/// `γ = ln(3√2/4)`.
pub fn gamma_pair() -> f64 {
    (0.75 * SQRT_2).ln()
}

fn full_grid_n(n: usize, min: usize) -> Result<()> {
    if n < min || n > FULL_GRID_MAX_N {
        return domain(format!(
            "full-grid checks need {min} <= n <= {FULL_GRID_MAX_N}, got {n}"
        ));
    }
    Ok(())
}

fn exact_table(n: usize) -> Option<BinomialTable> {
    (n <= EXACT_MAX_N).then(|| BinomialTable::new(n))
}

/// Run `task` for every item in parallel and merge the tallies in order.
fn fan_out<T: Sync>(items: &[T], task: impl Fn(&T) -> Tally + Sync + Send) -> Tally {
    items
        .par_iter()
        .map(task)
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge)
}

/// `P(Z = z) <= C(r, z)(m/n)^z`, and `P(Z = z) <= (4m/n)^z` when `z >= r/2`,
/// for `Z ~ Hypergeom(n, m, r)` and all `0 <= m, r <= n`, `0 <= z <= r`.
pub fn verify_hypergeom_tail(n: usize) -> Result<LemmaReport> {
    full_grid_n(n, 1)?;
    let lf = LnFactorials::new(n);
    let table = exact_table(n);
    let ms: Vec<usize> = (0..=n).collect();
    let nf = n as f64;
    let tally = fan_out(&ms, |&m| {
        let mut t = Tally::default();
        for r in 0..=n {
            for z in 0..=r {
                let point = Point {
                    m: Some(m),
                    r: Some(r),
                    z: Some(z),
                    ..Point::default()
                };
                let lv = ln_hypergeom(&lf, n, m, r, z);
                let zf = z as f64;
                let ln_m = if z == 0 { 0.0 } else { zf * (m as f64).ln() };
                let ln_bound = lf.ln_binomial(r, z) + ln_m - zf * nf.ln();
                t.check("binomial-tail", point, lv, ln_bound, || {
                    table.as_ref().map(|tb| {
                        let lhs = hypergeom_numerator(tb, n, m, r, z) * BigUint::from(n).pow(z);
                        let rhs = tb.get(r, z) * BigUint::from(m).pow(z) * tb.get(n, r);
                        lhs <= rhs
                    })
                });
                if 2 * z >= r {
                    let ln_bound = if z == 0 { 0.0 } else { zf * (4.0 * m as f64 / nf).ln() };
                    t.check("geometric-tail", point, lv, ln_bound, || {
                        table.as_ref().map(|tb| {
                            let lhs = hypergeom_numerator(tb, n, m, r, z) * BigUint::from(n).pow(z);
                            let rhs = BigUint::from(4 * m).pow(z) * tb.get(n, r);
                            lhs <= rhs
                        })
                    });
                }
            }
        }
        t
    });
    Ok(LemmaReport::from_tally(
        "hypergeom-tail",
        n,
        format!("all 0 <= m <= {n}, 0 <= r <= {n}, 0 <= z <= r"),
        tally,
    ))
}

/// `P(Δ₀(s, m, r) = z) <= 2^{-z/2}` for `s <= m <= n/8`, `1 <= r <= n`,
/// `1 <= z <= n`.
pub fn verify_improve_prob(n: usize) -> Result<LemmaReport> {
    full_grid_n(n, 8)?;
    let lf = LnFactorials::new(n);
    let table = exact_table(n);
    let pairs: Vec<(usize, usize)> = (0..=n / 8).flat_map(|s| (s..=n / 8).map(move |m| (s, m))).collect();
    let tally = fan_out(&pairs, |&(s, m)| {
        let mut t = Tally::default();
        for r in 1..=n {
            let p = ProgressParams { n, s, m, r };
            for z in 1..=n {
                let lv = p
                    .red_draws_for(z)
                    .map_or(f64::NEG_INFINITY, |k| ln_hypergeom(&lf, n, m, r, k));
                let ln_bound = -(z as f64) * LN_2 / 2.0;
                t.check("half-power", Point::smrz(s, m, r, z), lv, ln_bound, || {
                    table.as_ref().map(|tb| {
                        let k = p.red_draws_for(z).expect("value is positive");
                        let num = hypergeom_numerator(tb, n, m, r, k);
                        let den = tb.get(n, r);
                        &num * &num * BigUint::from(2u8).pow(z) <= &den * &den
                    })
                });
            }
        }
        t
    });
    Ok(LemmaReport::from_tally(
        "improve-prob",
        n,
        format!("0 <= s <= m <= {}, 1 <= r <= {n}, 1 <= z <= {n}", n / 8),
        tally,
    ))
}

/// `ln P(Δ₀(s, m, r) > 0)`, summing the hypergeometric upper tail from the
/// first count that makes progress; terms past it only decrease.
fn ln_positive_progress(lf: &LnFactorials, p: &ProgressParams) -> f64 {
    let ProgressParams { n, s, m, r } = *p;
    let first = (r + m - s) / 2 + 1;
    let mut acc = f64::NEG_INFINITY;
    for k in first..=m.min(r) {
        let l = ln_hypergeom(lf, n, m, r, k);
        if l == f64::NEG_INFINITY {
            continue;
        }
        acc = ln_add(acc, l);
        if l < acc - 45.0 {
            break;
        }
    }
    acc
}

fn exact_positive_progress_le_one(tb: &BinomialTable, p: &ProgressParams) -> bool {
    let ProgressParams { n, s, m, r } = *p;
    let first = (r + m - s) / 2 + 1;
    let total: BigUint = (first..=m.min(r)).map(|k| hypergeom_numerator(tb, n, m, r, k)).sum();
    total <= tb.get(n, r)
}

/// `P(Δ₀(s, m, r) > 0) <= exp(-(m - s)² / (2r))` for `s <= m <= n/2`,
/// `1 <= r <= n`.
pub fn verify_chvatal(n: usize) -> Result<LemmaReport> {
    full_grid_n(n, 2)?;
    let lf = LnFactorials::new(n);
    let table = exact_table(n);
    let pairs: Vec<(usize, usize)> = (0..=n / 2).flat_map(|s| (s..=n / 2).map(move |m| (s, m))).collect();
    let tally = fan_out(&pairs, |&(s, m)| {
        let mut t = Tally::default();
        for r in 1..=n {
            let p = ProgressParams { n, s, m, r };
            let lv = ln_positive_progress(&lf, &p);
            let d = (m - s) as f64;
            let ln_bound = -d * d / (2.0 * r as f64);
            t.check("chvatal", Point::smr(s, m, r), lv, ln_bound, || {
                // only the trivial bound 1 has an exact form
                if m == s {
                    table.as_ref().map(|tb| exact_positive_progress_le_one(tb, &p))
                } else {
                    None
                }
            });
        }
        t
    });
    Ok(LemmaReport::from_tally(
        "chvatal",
        n,
        format!("0 <= s <= m <= {}, 1 <= r <= {n}", n / 2),
        tally,
    ))
}

/// Both orientations of a step together:
/// `P(Δ₀(s, m, r) = z) + P(Δ₀(s, m, n - r) = z) <= 2^{1 - z/2}` for
/// `s <= n/8`, `s <= m <= n - s`, `1 <= r <= n`, `z >= 1`; then
/// `Σ_z λ 2^{1 - z/2} e^{γz} = 8λ` for every λ in `lambdas`.
pub fn verify_mgf(n: usize, lambdas: &[usize]) -> Result<LemmaReport> {
    full_grid_n(n, 8)?;
    let lf = LnFactorials::new(n);
    let table = exact_table(n);
    let pairs: Vec<(usize, usize)> = (0..=n / 8).flat_map(|s| (s..=n - s).map(move |m| (s, m))).collect();
    let ln_one = |p: &ProgressParams, z: usize| {
        p.red_draws_for(z)
            .map_or(f64::NEG_INFINITY, |k| ln_hypergeom(&lf, p.n, p.m, p.r, k))
    };
    let tally = fan_out(&pairs, |&(s, m)| {
        let mut t = Tally::default();
        for r in 1..=n {
            let a = ProgressParams { n, s, m, r };
            let b = ProgressParams { n, s, m, r: n - r };
            for z in 1..=n {
                let lv = ln_add(ln_one(&a, z), ln_one(&b, z));
                let ln_bound = (1.0 - z as f64 / 2.0) * LN_2;
                t.check("both-orientations", Point::smrz(s, m, r, z), lv, ln_bound, || {
                    table.as_ref().map(|tb| {
                        let num = |p: &ProgressParams| {
                            p.red_draws_for(z)
                                .map_or(BigUint::ZERO, |k| hypergeom_numerator(tb, n, m, p.r, k))
                        };
                        // C(n, r) = C(n, n - r), so both share a denominator
                        let sum = num(&a) + num(&b);
                        let den = tb.get(n, r);
                        &sum * &sum * BigUint::from(2u8).pow(z) <= BigUint::from(4u8) * &den * &den
                    })
                });
            }
        }
        t
    });
    let mut report = LemmaReport::from_tally(
        "mgf",
        n,
        format!("0 <= s <= {}, s <= m <= n - s, 1 <= r <= {n}, 1 <= z <= {n}", n / 8),
        tally,
    );
    let gamma = gamma_pair();
    for &lambda in lambdas {
        let series: f64 = (0..=400)
            .map(|z| lambda as f64 * 2f64.powf(1.0 - z as f64 / 2.0) * (gamma * z as f64).exp())
            .sum();
        let target = 8.0 * lambda as f64;
        let rel = ((series - target) / target).abs();
        report.detail_check(&format!("series_lambda_{lambda}"), series, rel <= 1e-9);
    }
    Ok(report)
}

/// `E[e^{ηΔ₀(s, m, r)}] <= D` with `e^η = 4/3`, `D = 9 + 6√2` for
/// `s <= m <= n/8`, `1 <= r <= n`; the identity `Σ_z 2^{-z/2}(4/3)^z = D`;
/// and, at every grid point, the exact expected maximum of λ independent
/// copies against `(ln(Dλ) + 1)/η` for λ in `lambdas`.
pub fn verify_mgf_max(n: usize, lambdas: &[usize]) -> Result<LemmaReport> {
    full_grid_n(n, 8)?;
    let lf = LnFactorials::new(n);
    let eta = MGF_EXP_ETA.ln();
    let d = mgf_d();
    let ln_d = d.ln();
    let max_bounds: Vec<(usize, f64)> = lambdas
        .iter()
        .map(|&l| expected_max_bound(eta, d, l as f64).map(|b| (l, b)))
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..=n / 8).flat_map(|s| (s..=n / 8).map(move |m| (s, m))).collect();
    let tally = fan_out(&pairs, |&(s, m)| {
        let mut t = Tally::default();
        for r in 1..=n {
            let p = ProgressParams { n, s, m, r };
            let pmf = delta0_with(&lf, &p);
            let ln_mgf = pmf
                .ln_p
                .iter()
                .enumerate()
                .fold(f64::NEG_INFINITY, |acc, (z, l)| ln_add(acc, l + eta * z as f64));
            t.check("exponential-moment", Point::smr(s, m, r), ln_mgf, ln_d, || None);
            let probs: Vec<f64> = pmf.ln_p.iter().map(|l| l.exp()).collect();
            for &(lambda, bound) in &max_bounds {
                let mut cdf = 0.0;
                let mut e_max = 0.0;
                for pz in &probs[..probs.len() - 1] {
                    cdf += pz;
                    e_max += 1.0 - cdf.min(1.0).powi(lambda as i32);
                }
                let point = Point {
                    lambda: Some(lambda),
                    ..Point::smr(s, m, r)
                };
                t.check("expected-maximum", point, e_max.ln(), bound.ln(), || None);
            }
        }
        t
    });
    let mut report = LemmaReport::from_tally(
        "mgf-max",
        n,
        format!("0 <= s <= m <= {}, 1 <= r <= {n}; lambda in {lambdas:?}", n / 8),
        tally,
    );
    let series: f64 = (0..=2000)
        .map(|z| (0.5f64).powf(z as f64 / 2.0) * MGF_EXP_ETA.powi(z))
        .sum();
    report.detail_check("series", series, ((series - d) / d).abs() <= 1e-9);
    report.details.insert("D".into(), d);
    report.details.insert("eta".into(), eta);
    for (lambda, bound) in max_bounds {
        report.details.insert(format!("max_bound_lambda_{lambda}"), bound);
    }
    Ok(report)
}

fn geometric_grid(lo: f64, hi: f64, points: usize) -> Vec<usize> {
    let ratio = (hi / lo).powf(1.0 / (points - 1) as f64);
    (0..points)
        .map(|i| (lo * ratio.powi(i as i32)).round() as usize)
        .collect()
}

/// Multi-bit steps near a small potential, on a sampled grid for large `n`.
/// With `n* = n/(2¹³ ln n)`: for `s in {0, 1, 2}`,
/// `m in [s, 2n*] ∪ [n - 2n*, n - s]`, `2 <= r <= n - 2`, `1 <= z <= 200`,
/// `P(Δ₀(s, m, r) = z) <= (16n*/n)² 2^{-z}`. For `2n* < m < n - 2n*` the
/// probability of any progress is checked against the Chvátal-type bound
/// `exp(-(m' - s)²/(2r'))`, with `(m', r') = (n - m, n - r)` when `m > n/2`.
pub fn verify_multibit(n: usize) -> Result<LemmaReport> {
    if n < 16 {
        return domain(format!("multi-bit progress check needs n >= 16, got {n}"));
    }
    let ns = n_star(n as f64)?;
    if ns < 2.0 {
        return domain(format!(
            "n* = n/(2^13 ln n) = {ns:.3} at n = {n}; the check needs n* >= 2, i.e. n of roughly 2.3e5 or more"
        ));
    }
    let lf = LnFactorials::new(n);
    let two_ns = 2.0 * ns;
    let mut rs: Vec<usize> = (2..=64).collect();
    for r in geometric_grid(2.0, (n - 2) as f64, 64) {
        rs.push(r);
        rs.push(n - r);
    }
    rs.retain(|&r| (2..=n - 2).contains(&r));
    rs.sort_unstable();
    rs.dedup();

    let ln_bound_base = 2.0 * (16.0 * ns / n as f64).ln();
    let mut edge = Vec::new();
    let mut middle = Vec::new();
    for s in 0..=2usize {
        let low_top = two_ns.floor() as usize;
        let high_bottom = (n as f64 - two_ns).ceil() as usize;
        edge.extend((s..=low_top).map(|m| (s, m)));
        edge.extend((high_bottom..=n - s).map(|m| (s, m)));
        let mut ms: Vec<usize> = Vec::new();
        for m in geometric_grid(two_ns.ceil(), (n / 2) as f64, 64) {
            ms.push(m);
            ms.push(n - m);
        }
        ms.retain(|&m| (m as f64) > two_ns && (m as f64) < n as f64 - two_ns);
        ms.sort_unstable();
        ms.dedup();
        middle.extend(ms.into_iter().map(|m| (s, m)));
    }

    let edge_tally = fan_out(&edge, |&(s, m)| {
        let mut t = Tally::default();
        for &r in &rs {
            let p = ProgressParams { n, s, m, r };
            for z in 1..=200usize {
                let lv = p
                    .red_draws_for(z)
                    .map_or(f64::NEG_INFINITY, |k| ln_hypergeom(&lf, n, m, r, k));
                let ln_bound = ln_bound_base - z as f64 * LN_2;
                t.check("edge-regime", Point::smrz(s, m, r, z), lv, ln_bound, || None);
            }
        }
        t
    });
    let middle_tally = fan_out(&middle, |&(s, m)| {
        let mut t = Tally::default();
        for &r in &rs {
            let p = ProgressParams { n, s, m, r };
            let lv = ln_positive_progress(&lf, &p);
            let (mm, rr) = if 2 * m <= n { (m, r) } else { (n - m, n - r) };
            let d = (mm - s) as f64;
            let ln_bound = -d * d / (2.0 * rr as f64);
            t.check("middle-regime", Point::smr(s, m, r), lv, ln_bound, || None);
        }
        t
    });
    let mut report = LemmaReport::from_tally(
        "multibit",
        n,
        format!(
            "s in 0..=2; m: every integer in [s, 2n*] and [n - 2n*, n - s] plus a 64-point geometric grid on (2n*, n/2] and its mirror; \
             r: 2..=64 plus a 64-point geometric grid on [2, n - 2] and its mirror ({} values); z in 1..=200",
            rs.len()
        ),
        edge_tally.merge(middle_tally),
    );
    report.details.insert("n_star".into(), ns);
    report.details.insert("edge_factor".into(), ln_bound_base.exp());
    report
        .notes
        .push("progress of odd parity relative to r + m - s has probability zero".into());
    Ok(report)
}

/// Single-bit survival `(1 - 1/k)^T >= k^{-(1 - δ)}` with
/// `T = (1 - δ)(k - 1) ln k`, for `k in {10, 100, 1000, n}` and a range of δ.
pub fn verify_coupon(n: usize) -> Result<LemmaReport> {
    if n < 2 {
        return domain(format!("coupon check needs n >= 2, got {n}"));
    }
    let mut ks = vec![10usize, 100, 1000, n];
    ks.sort_unstable();
    ks.dedup();
    let deltas = [0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0];
    let mut tally = Tally::default();
    for &k in &ks {
        for &delta in &deltas {
            let kf = k as f64;
            let t = (1.0 - delta) * (kf - 1.0) * kf.ln();
            let ln_survival = t * (-1.0 / kf).ln_1p();
            let ln_floor = -(1.0 - delta) * kf.ln();
            let point = Point {
                n: Some(k),
                delta: Some(delta),
                ..Point::default()
            };
            tally.check("survival", point, ln_floor, ln_survival, || {
                (delta == 1.0).then_some(true)
            });
        }
    }
    let mut report = LemmaReport::from_tally("coupon", n, format!("k in {ks:?}, delta in {deltas:?}"), tally);
    let cb = coupon_bound(n as f64, 0.5)?;
    report.details.insert("threshold_delta_0.5".into(), cb.threshold);
    report
        .details
        .insert("ln_prob_bound_delta_0.5".into(), cb.ln_prob_bound);
    report.details.insert("n_star".into(), cb.n_star);
    Ok(report)
}
