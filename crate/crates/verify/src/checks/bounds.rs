//! Sampled numeric experiments for the quantitative bounds: the telescoping
//! inequalities for `[x, χ̃_1]`, the tail decay of ξ^{i,l,k} coefficients of
//! γ-combinations, and the decay of `⟨η_1 g, h η_2⟩` with the flank length.
//!
//! The constants in these bounds are not computable; each check records the
//! empirical constant as its ratio and asserts only what holds without it.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use nctorus_core::basis::{seed_families, v_powers, FamilyIndex};
use nctorus_core::{Algebra, Block, Coeff, NumericCtx, Vector, Word, WordClass};
use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::checks::commutator::{random_table, vector_of};
use crate::checks::ilk::{gamma_combination, gamma_parts};
use crate::report::{Entry, Mode, Status};
use crate::tally::{round_dev, Tally};
use crate::{rng_for, SuiteConfig};

type Key = (u8, i32, i32, usize, usize);

/// Largest `r`, `s` in the sampled tables, entries per table, and the
/// telescoping depths `s ≤ s' ≤ TELE_DEPTH`.
const TELE_RS: usize = 4;
const TELE_ENTRIES: usize = 12;
const TELE_DEPTH: usize = 3;

/// Numeric coefficients of a normalised `x`, with `‖[x, χ̃_1]‖₂`.
struct Sample {
    alpha: HashMap<Key, Complex64>,
    sectors: BTreeSet<(u8, i32)>,
    k_range: (i32, i32),
    commutator: f64,
}

impl Sample {
    fn get(&self, key: Key) -> Complex64 {
        self.alpha.get(&key).copied().unwrap_or_default()
    }
}

/// Row (`mirror = false`) or column telescoping at depth `s`, tail from `s2`:
/// returns (left side, middle term) of the first inequality.
fn telescope(x: &Sample, s: usize, s2: usize, mirror: bool, theta: f64) -> (f64, f64) {
    let pos = |main: usize, fixed: usize| if mirror { (fixed, main) } else { (main, fixed) };
    let inv = 1.0 / 3f64.sqrt();
    let (mut mid, mut tel, mut own) = (0.0, 0.0, 0.0);
    for &(i, l) in &x.sectors {
        let (dm, dp) = if mirror {
            let d = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * theta * l as f64);
            (d * inv, d.inv() * inv)
        } else {
            (Complex64::new(inv, 0.0), Complex64::new(inv, 0.0))
        };
        for k in x.k_range.0 - 1..=x.k_range.1 + 1 {
            let at = |k: i32, (r, q): (usize, usize)| x.get((i, l, k, r, q));
            for n in s..=TELE_RS + s + 1 {
                let mut t = Complex64::zero();
                for j in 0..=s {
                    t += at(k, pos(n - s + 2 * j, 0));
                }
                for j in 0..s {
                    let p = pos(n - s + 1 + 2 * j, 0);
                    t -= dm * at(k - 1, p) + dp * at(k + 1, p);
                }
                let a = at(k, pos(n, s));
                mid += (a - t).norm_sqr();
                if n >= s2 {
                    tel += t.norm_sqr();
                    own += a.norm_sqr();
                }
            }
        }
    }
    (tel.sqrt() - own.sqrt(), mid.sqrt())
}

fn telescoping_sample(cfg: &SuiteConfig, rng: &mut rand_chacha::ChaCha8Rng) -> Option<Sample> {
    let t = Tally::new(cfg.theta);
    let a = t.alg();
    let table = random_table(cfg, rng, TELE_RS, TELE_ENTRIES);
    let x = vector_of(&a, &table);
    let ct = a.chi_tilde();
    let y = a.mul_vec(&ct, &x).sub(&a.mul_vec(&x, &ct));
    let nx = x.norm_sq().approx.re.sqrt();
    if nx == 0.0 {
        return None;
    }
    let mut alpha = HashMap::new();
    let mut sectors = BTreeSet::new();
    let mut k_range = (i32::MAX, i32::MIN);
    for ((f, r, s), c) in &table.entries {
        if let FamilyIndex::Ilk { i, l, k } = *f {
            alpha.insert((i, l, k, *r, *s), c.approx / nx);
            sectors.insert((i, l));
            k_range = (k_range.0.min(k), k_range.1.max(k));
        }
    }
    Some(Sample {
        alpha,
        sectors,
        k_range,
        commutator: y.norm_sq().approx.re.sqrt() / nx,
    })
}

pub fn telescoping_bounds(cfg: &SuiteConfig) -> Entry {
    let id = "telescoping-bounds";
    let mut t = Tally::new(cfg.theta);
    let mut rng = rng_for(cfg.seed, id);
    let mut worst: f64 = 0.0;
    let mut rejected = 0;
    for sample in 0..cfg.samples {
        let Some(x) = telescoping_sample(cfg, &mut rng) else {
            rejected += 1;
            continue;
        };
        for mirror in [false, true] {
            for s in 1..=TELE_DEPTH {
                for s2 in s..=TELE_DEPTH + 1 {
                    let (lhs, mid) = telescope(&x, s, s2, mirror, cfg.theta);
                    t.check(lhs <= mid + cfg.tolerance * (1.0 + mid), || {
                        json!({"sample": sample, "side": if mirror { "column" } else { "row" },
                               "s": s, "s_prime": s2, "lhs": lhs, "middle": mid})
                    });
                }
                let (_, mid) = telescope(&x, s, s, mirror, cfg.theta);
                let bound = 3f64.powi(s as i32 - 1) * x.commutator;
                let ratio = if mid <= cfg.tolerance { 0.0 } else { mid / bound };
                t.check(ratio.is_finite(), || json!({"sample": sample, "s": s, "middle": mid, "commutator": x.commutator}));
                worst = worst.max(ratio);
            }
        }
    }
    let mut e = t.finish(
        Entry::new(id, Mode::SampledNumeric)
            .param("samples", cfg.samples)
            .param("rejected_samples", rejected)
            .param("rs_max", TELE_RS)
            .param("depth_max", TELE_DEPTH)
            .param("constant", "C_0 replaced by the recorded ratio"),
    );
    e.ratio = Some(round_dev(worst));
    e
}

/// Largest `k_0` in the tail experiment.
const TAIL_K0: i32 = 6;

pub fn ilk_tail_decay(cfg: &SuiteConfig) -> Entry {
    let id = "ilk-tail-decay";
    let mut t = Tally::new(cfg.theta);
    let a = t.alg();
    let mut rng = rng_for(cfg.seed, id);
    let gammas = gamma_parts(cfg.theta);
    let mut worst: f64 = 0.0;
    let mut widest = 0;
    for sample in 0..cfg.samples {
        let (x, _) = gamma_combination(&a, &gammas, &mut rng);
        let n2 = x.norm_sq().approx.re;
        if n2 == 0.0 {
            continue;
        }
        let table = a.ilk_coefficients(&x);
        // |β^k|² per (i, l, r, s), for ‖x‖ = 1.
        let mut groups: BTreeMap<(u8, i32, usize, usize), BTreeMap<i32, f64>> = BTreeMap::new();
        for ((f, r, s), c) in &table.entries {
            if let FamilyIndex::Ilk { i, l, k } = *f {
                *groups.entry((i, l, *r, *s)).or_default().entry(k.abs()).or_default() += c.approx.norm_sqr() / n2;
                widest = widest.max(k.abs());
            }
        }
        for (g, by_k) in &groups {
            let tail = |k0: i32| by_k.range(k0..).map(|(_, v)| v).sum::<f64>();
            for k0 in 1..=TAIL_K0 {
                let (now, next) = (tail(k0), tail(k0 + 1));
                t.check(next <= now * (1.0 + cfg.tolerance), || {
                    json!({"sample": sample, "group": [g.0, g.1, g.2, g.3], "k0": k0, "tail": now, "next": next})
                });
                worst = worst.max(3.0 * 2f64.powi(k0) * now);
            }
        }
    }
    let mut e = t.finish(
        Entry::new(id, Mode::SampledNumeric)
            .param("samples", cfg.samples)
            .param("k0_max", TAIL_K0)
            .param("widest_k", widest)
            .param("constant", "C replaced by the recorded ratio max 3·2^k0·tail(k0)"),
    );
    e.ratio = Some(round_dev(worst));
    e
}

type NAlg = Algebra<Complex64>;
type NVector = Vector<Complex64>;

/// Pool members per η, and extra flank length `r + s ≤ 1` beyond `2M`.
const ETA_TERMS: usize = 3;
const FLANK_EXTRA: [(i64, i64); 3] = [(0, 0), (1, 0), (0, 1)];

/// `(ξ_m)_{2M+r, 2M+s}` for the class-0 seeds and the `v`-powers of length 1.
fn eta_pool(a: &NAlg, theta: f64, m: usize) -> Vec<NVector> {
    let mut seeds: Vec<_> = seed_families(1)
        .into_iter()
        .filter(|f| f.label.coarse() == WordClass::Zero)
        .flat_map(|f| f.members)
        .collect();
    seeds.extend(v_powers(1));
    let lifted: Vec<NVector> = seeds
        .iter()
        .map(|v| v.map(|c| c.eval_numeric(theta).expect("d is not a pole")))
        .collect();
    let jobs: Vec<(usize, (i64, i64))> = (0..lifted.len())
        .flat_map(|j| FLANK_EXTRA.iter().map(move |&e| (j, e)))
        .collect();
    jobs.par_iter()
        .map(|&(j, (r, s))| a.xi_rs(&lifted[j], 2 * m as i64 + r, 2 * m as i64 + s).expect("homogeneous"))
        .collect()
}

/// A pair `(g, h)` of words with the total `u`-exponent `k` that the decay
/// hypothesis `M > 4k` is measured against.
struct Pair {
    label: String,
    g: Word,
    h: Word,
    k: usize,
}

fn word(blocks: &[(u8, i32, i32)]) -> Word {
    Word::from_blocks(blocks.iter().map(|&(f, k, l)| Block::new(f, k, l)))
}

/// Products of normalising unitaries `v_i` and powers `u_i^j` in alternating
/// factors, each pair containing at least one `v_i`. Only `k = 0` meets
/// `M > 4k` at these `M`; the others are evaluated and flagged.
fn pairs() -> Vec<Pair> {
    let mut out = vec![
        Pair { label: "g = v1, h = v1".into(), g: word(&[(1, 0, 1)]), h: word(&[(1, 0, 1)]), k: 0 },
        Pair { label: "g = v2, h = v1 v2".into(), g: word(&[(2, 0, 1)]), h: word(&[(1, 0, 1), (2, 0, 1)]), k: 0 },
        Pair { label: "g = v1^-1 v2, h = v2".into(), g: word(&[(1, 0, -1), (2, 0, 1)]), h: word(&[(2, 0, 1)]), k: 0 },
    ];
    for j in 1..=2 {
        out.push(Pair {
            label: format!("g = v2 u1^{j}, h = u1"),
            g: word(&[(2, 0, 1), (1, j, 0)]),
            h: word(&[(1, 1, 0)]),
            k: j as usize + 1,
        });
        out.push(Pair {
            label: format!("g = u1, h = u1^{j} v2"),
            g: word(&[(1, 1, 0)]),
            h: word(&[(1, j, 0), (2, 0, 1)]),
            k: j as usize + 1,
        });
    }
    out
}

struct MRow {
    m: usize,
    max_ratio: f64,
    max_admissible: f64,
    samples: usize,
    violating: usize,
    rejected: usize,
    best: String,
}

fn aop_row(cfg: &SuiteConfig, m: usize) -> MRow {
    let a: NAlg = Algebra::new(NumericCtx::new(cfg.theta));
    let pool = eta_pool(&a, cfg.theta, m);
    let mut rng = rng_for(cfg.seed, &format!("aop-decay/M={m}"));
    let draws: Vec<[Vec<(usize, i64)>; 2]> = (0..cfg.aop_seeds)
        .map(|_| {
            let mut eta = || {
                (0..ETA_TERMS)
                    .map(|_| {
                        let c = [-3i64, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
                        (rng.gen_range(0..pool.len()), c)
                    })
                    .collect::<Vec<_>>()
            };
            [eta(), eta()]
        })
        .collect();
    let pairs = pairs();
    let results: Vec<Option<Vec<f64>>> = draws
        .par_iter()
        .map(|[d1, d2]| {
            let build = |d: &Vec<(usize, i64)>| {
                let mut v = NVector::zero();
                for &(j, c) in d {
                    v.add_scaled(&Complex64::from_int(c), &pool[j]);
                }
                v
            };
            let (e1, e2) = (build(d1), build(d2));
            let norm = (e1.norm_sq().re * e2.norm_sq().re).sqrt();
            if norm == 0.0 {
                return None;
            }
            Some(
                pairs
                    .iter()
                    .map(|p| {
                        let lhs = a.mul_vec(&e1, &NVector::from_word(p.g.clone()));
                        let rhs = a.mul_vec(&NVector::from_word(p.h.clone()), &e2);
                        lhs.inner(&rhs).norm() / norm
                    })
                    .collect(),
            )
        })
        .collect();
    let mut row = MRow {
        m,
        max_ratio: 0.0,
        max_admissible: 0.0,
        samples: 0,
        violating: 0,
        rejected: 0,
        best: String::new(),
    };
    for r in results {
        let Some(ratios) = r else {
            row.rejected += 1;
            continue;
        };
        for (p, ratio) in pairs.iter().zip(ratios) {
            row.samples += 1;
            if m > 4 * p.k {
                row.max_admissible = row.max_admissible.max(ratio);
            } else {
                row.violating += 1;
            }
            if ratio > row.max_ratio {
                row.max_ratio = ratio;
                row.best = p.label.clone();
            }
        }
    }
    row
}

pub fn aop_decay(cfg: &SuiteConfig) -> Entry {
    let mut ms = cfg.aop_m.clone();
    ms.sort_unstable();
    ms.dedup();
    let rows: Vec<MRow> = ms.iter().map(|&m| aop_row(cfg, m)).collect();
    let decreasing = rows.windows(2).all(|w| w[1].max_admissible < w[0].max_admissible);
    let table: Vec<_> = rows
        .iter()
        .map(|r| {
            json!({
                "M": r.m,
                "max_ratio": round_dev(r.max_ratio),
                "max_ratio_admissible": round_dev(r.max_admissible),
                "envelope": round_dev((r.m as f64).powi(4) * 3f64.powf(-(r.m as f64) / 2.0)),
                "pairs_evaluated": r.samples,
                "hypothesis_violated": r.violating,
                "rejected_samples": r.rejected,
                "attained_by": r.best,
            })
        })
        .collect();
    let mut e = Entry::new("aop-decay", Mode::SampledNumeric)
        .param("seeds", cfg.aop_seeds)
        .param("eta_terms", ETA_TERMS)
        .param("per_m", table)
        .param("pairs", pairs().iter().map(|p| json!({"pair": p.label, "k": p.k})).collect::<Vec<_>>());
    e.status = if decreasing && rows.len() >= 2 { Status::Pass } else { Status::Fail };
    if let (Some(first), Some(last)) = (rows.first(), rows.last()) {
        if first.max_admissible > 0.0 {
            e.ratio = Some(round_dev(last.max_admissible / first.max_admissible));
        }
    }
    e.with_note(
        "status and ratio use the pairs meeting M > 4k (k = 0 at these M); pairs with M <= 4k are \
         evaluated and counted as hypothesis_violated, with no bound claimed for them. The envelope \
         M^4 3^{-M/2} grows from M = 1 to M = 2, so the decrease is an empirical trend only",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn telescoping_holds_on_a_few_samples() {
        let cfg = SuiteConfig { samples: 4, ..SuiteConfig::default() };
        let e = telescoping_bounds(&cfg);
        assert_eq!(e.status, Status::Pass);
        assert!(e.ratio.unwrap().is_finite());
    }

    #[test]
    fn tail_is_monotone() {
        let cfg = SuiteConfig { samples: 3, ..SuiteConfig::default() };
        assert_eq!(ilk_tail_decay(&cfg).status, Status::Pass);
    }

    #[test]
    fn ratios_are_recorded_for_both_kinds_of_pair() {
        let cfg = SuiteConfig { aop_seeds: 4, ..SuiteConfig::default() };
        let row = aop_row(&cfg, 1);
        assert!(row.max_admissible > 0.0);
        assert!(row.max_ratio >= row.max_admissible);
        assert_eq!(row.violating, 4 * (pairs().len() - 3));
    }
}

