//! Shared test support: random table generation and a self-contained
//! brute-force oracle.
//!
//! The oracle works in hand-rolled `i128` rational arithmetic — a different
//! number type and a different algorithm (direct minimization) than the
//! library's envelope machinery — so agreement between the two is meaningful.
//! Inputs are kept small enough that `i128` cross-multiplication cannot
//! overflow.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tradeoff_core::scalar::{ExactScalar, Scalar};
use tradeoff_core::table::{Candidate, ObjectiveTable};

/// Minimal exact rational on `i128`, kept in lowest terms with a positive
/// denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Q {
    pub n: i128,
    pub d: i128,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl Q {
    pub fn new(n: i128, d: i128) -> Q {
        assert!(d != 0);
        let sign = if d < 0 { -1 } else { 1 };
        let g = gcd(n, d);
        Q {
            n: sign * n / g,
            d: sign * d / g,
        }
    }

    pub fn int(n: i128) -> Q {
        Q { n, d: 1 }
    }

    pub fn add(self, o: Q) -> Q {
        Q::new(self.n * o.d + o.n * self.d, self.d * o.d)
    }

    pub fn sub(self, o: Q) -> Q {
        Q::new(self.n * o.d - o.n * self.d, self.d * o.d)
    }

    pub fn mul(self, o: Q) -> Q {
        Q::new(self.n * o.n, self.d * o.d)
    }

    pub fn cmp_q(&self, o: &Q) -> std::cmp::Ordering {
        (self.n * o.d).cmp(&(o.n * self.d))
    }

    pub fn lt(&self, o: &Q) -> bool {
        self.cmp_q(o) == std::cmp::Ordering::Less
    }

    pub fn to_exact(self) -> ExactScalar {
        ExactScalar::from_ratio(self.n as i64, self.d as i64)
    }
}

/// One random candidate as raw ratios: `(f, g_1 .. g_m)`.
pub type RawCandidate = ((i64, i64), Vec<(i64, i64)>);

/// Draws `n` candidates with numerators in `[-100, 100]` and denominators in
/// `[1, 16]` — small enough for the `i128` oracle, varied enough to produce
/// slope ties, intercept ties and vertex concurrences.
pub fn random_raw(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<RawCandidate> {
    (0..n)
        .map(|_| {
            let f = (rng.gen_range(-100..=100), rng.gen_range(1..=16));
            let g = (0..m)
                .map(|_| (rng.gen_range(-100..=100), rng.gen_range(1..=16)))
                .collect();
            (f, g)
        })
        .collect()
}

pub fn raw_to_table(raw: &[RawCandidate]) -> ObjectiveTable<ExactScalar> {
    let m = raw[0].1.len();
    let candidates = raw
        .iter()
        .enumerate()
        .map(|(i, (f, g))| {
            Candidate::new(
                format!("c{i}"),
                ExactScalar::from_ratio(f.0, f.1),
                g.iter()
                    .map(|(n, d)| ExactScalar::from_ratio(*n, *d))
                    .collect(),
            )
        })
        .collect();
    ObjectiveTable::new(m, candidates).expect("random table is well-formed")
}

pub fn raw_to_approx_table(
    raw: &[RawCandidate],
    tol: f64,
) -> ObjectiveTable<tradeoff_core::ApproxScalar> {
    use tradeoff_core::ApproxScalar;
    let m = raw[0].1.len();
    let candidates = raw
        .iter()
        .enumerate()
        .map(|(i, (f, g))| {
            Candidate::new(
                format!("c{i}"),
                ApproxScalar::new(f.0 as f64 / f.1 as f64, tol),
                g.iter()
                    .map(|(n, d)| ApproxScalar::new(*n as f64 / *d as f64, tol))
                    .collect(),
            )
        })
        .collect();
    ObjectiveTable::new(m, candidates).expect("random table is well-formed")
}

pub fn raw_to_oracle(raw: &[RawCandidate]) -> Vec<(Q, Vec<Q>)> {
    raw.iter()
        .map(|(f, g)| {
            (
                Q::new(f.0 as i128, f.1 as i128),
                g.iter()
                    .map(|(n, d)| Q::new(*n as i128, *d as i128))
                    .collect(),
            )
        })
        .collect()
}

/// Brute-force minimum of `f + <alpha, g>` over the oracle candidates,
/// returning the value and the full argmin set.
pub fn oracle_min(cands: &[(Q, Vec<Q>)], alpha: &[Q]) -> (Q, Vec<usize>) {
    let mut best: Option<Q> = None;
    let mut values = Vec::with_capacity(cands.len());
    for (f, g) in cands {
        let mut h = *f;
        for (a, gj) in alpha.iter().zip(g) {
            h = h.add(a.mul(*gj));
        }
        if best.is_none_or(|b| h.lt(&b)) {
            best = Some(h);
        }
        values.push(h);
    }
    let best = best.unwrap();
    let argmin = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == best)
        .map(|(i, _)| i)
        .collect();
    (best, argmin)
}

/// Spread of `g[axis]` over the oracle argmin at `alpha`.
pub fn oracle_g_spread(cands: &[(Q, Vec<Q>)], alpha: &[Q], axis: usize) -> (Q, Q) {
    let (_, argmin) = oracle_min(cands, alpha);
    let mut lo = cands[argmin[0]].1[axis];
    let mut hi = lo;
    for &i in &argmin[1..] {
        let g = cands[i].1[axis];
        if g.lt(&lo) {
            lo = g;
        }
        if hi.lt(&g) {
            hi = g;
        }
    }
    (lo, hi)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A decreasing epsilon schedule `1/2, 1/4, ...` that keeps going several
/// steps after dropping below `floor`, so sequence tails reach the argmin gap
/// and then stay there long enough to show their limiting behavior.
pub fn schedule_below(floor: &ExactScalar) -> Vec<ExactScalar> {
    let mut out = Vec::new();
    let mut i = 1;
    let mut past_floor = 0;
    loop {
        let eps = ExactScalar::pow2_neg(i);
        if eps.is_lt(floor) {
            past_floor += 1;
        }
        out.push(eps);
        if past_floor >= 6 || i > 200 {
            return out;
        }
        i += 1;
    }
}
