//! Randomized robustness run of the intersection oracle on polynomial germs.

use dicrit_germ::oracle::{intersection_traced, Multiplicity, OracleConfig};
use dicrit_germ::parse::Germ;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;

/// Outcome of [`oracle_robustness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRun {
    pub pairs: usize,
    /// Coordinate changes evaluated over all pairs and triples.
    pub changes: usize,
    /// Largest intersection number seen, to show the sample is not trivial.
    pub max_i0: u64,
    pub failures: Vec<String>,
}

fn pair_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0a5c_1e00);
    rng.set_stream(i as u64);
    rng
}

/// A random polynomial through the origin of total degree at most `max_degree`.
pub fn random_germ(rng: &mut impl Rng, max_degree: usize) -> Germ {
    loop {
        let d = rng.gen_range(1..=max_degree.max(1));
        let order = rng.gen_range(1..=d.min(3));
        let mut terms = Vec::new();
        for total in order..=d {
            for i in 0..=total {
                if rng.gen_bool(0.35) {
                    let c = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
                    terms.push(((i, total - i), BigRational::from_integer(BigInt::from(c))));
                }
            }
        }
        let f = Germ::from_terms(terms);
        if !f.is_zero() {
            return f;
        }
    }
}

fn coprime(f: &Germ, g: &Germ) -> bool {
    f.gcd(g).is_constant()
}

/// Traced intersection that insists on `changes` agreeing coordinate changes.
fn traced(f: &Germ, g: &Germ, seed: u64, label: &str) -> Result<(u64, usize), String> {
    let cfg = OracleConfig { seed, ..OracleConfig::default() };
    let (m, trace) = intersection_traced(f, g, &cfg).map_err(|e| format!("{label}: {e}"))?;
    let Multiplicity::Finite(v) = m else { return Err(format!("{label}: infinite for coprime germs")) };
    if v > 0 && trace.len() != cfg.changes {
        return Err(format!("{label}: {} coordinate changes, wanted {}", trace.len(), cfg.changes));
    }
    if let Some((c, w)) = trace.iter().find(|(_, w)| *w != v) {
        return Err(format!("{label}: change {c:?} gave {w}, others {v}"));
    }
    Ok((v, trace.len()))
}

fn run_pair(seed: u64, i: usize, max_degree: usize) -> Result<(u64, usize), String> {
    let mut rng = pair_rng(seed, i);
    let (f, g) = loop {
        let (f, g) = (random_germ(&mut rng, max_degree), random_germ(&mut rng, max_degree));
        if coprime(&f, &g) {
            break (f, g);
        }
    };
    let h = loop {
        let h = random_germ(&mut rng, max_degree);
        if coprime(&f, &h) && coprime(&g, &h) {
            break h;
        }
    };
    let label = |what: &str| format!("pair {i} {what} (f = {f}, g = {g}, h = {h})");
    let s = rng.gen::<u64>();
    let (fg, c1) = traced(&f, &g, s, &label("i0(f,g)"))?;
    let (gf, c2) = traced(&g, &f, s ^ 1, &label("i0(g,f)"))?;
    if fg != gf {
        return Err(format!("{}: {fg} vs {gf}", label("symmetry")));
    }
    let (fh, c3) = traced(&f, &h, s ^ 2, &label("i0(f,h)"))?;
    let (gh, c4) = traced(&g, &h, s ^ 3, &label("i0(g,h)"))?;
    let (prod, c5) = traced(&(&f * &g), &h, s ^ 4, &label("i0(fg,h)"))?;
    if prod != fh + gh {
        return Err(format!("{}: {prod} vs {fh} + {gh}", label("additivity")));
    }
    Ok((fg.max(prod), c1 + c2 + c3 + c4 + c5))
}

/// Draws `pairs` coprime germ pairs `(f, g)` of degree at most `max_degree`
/// together with a third germ `h`, and checks that every intersection number
/// agrees across independent coordinate changes, is symmetric, and is
/// additive: `i0(fg, h) = i0(f, h) + i0(g, h)`.
pub fn oracle_robustness(seed: u64, pairs: usize, max_degree: usize) -> OracleRun {
    let runs: Vec<Result<(u64, usize), String>> = (0..pairs).into_par_iter().map(|i| run_pair(seed, i, max_degree)).collect();
    let mut run = OracleRun { pairs, changes: 0, max_i0: 0, failures: Vec::new() };
    for r in runs {
        match r {
            Ok((m, c)) => {
                run.max_i0 = run.max_i0.max(m);
                run.changes += c;
            }
            Err(e) => run.failures.push(e),
        }
    }
    run
}
