//! Deterministic fixture generators for the acceptance campaign.

use std::fmt;
use std::str::FromStr;

use lineable::polynomials::{FiniteTypePoly, HomPoly, MultiIndex, MultilinearForm, SparseVector, TailRule};
use lineable::scalars::{Field, Scalar};
use lineable::spaces::SeedSpace;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    ComplexSparse,
    Seeded,
    FiniteTypeReal,
    PositiveDefiniteRealTail,
    Multilinear,
}

impl FixtureKind {
    pub const ALL: [FixtureKind; 5] = [
        FixtureKind::ComplexSparse,
        FixtureKind::Seeded,
        FixtureKind::FiniteTypeReal,
        FixtureKind::PositiveDefiniteRealTail,
        FixtureKind::Multilinear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureKind::ComplexSparse => "complex-sparse",
            FixtureKind::Seeded => "seeded",
            FixtureKind::FiniteTypeReal => "finite-type-real",
            FixtureKind::PositiveDefiniteRealTail => "positive-definite-real-tail",
            FixtureKind::Multilinear => "multilinear",
        }
    }
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixtureKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| CliError::UnknownKind(s.to_string()))
    }
}

/// Shape parameters shared by the generators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixtureParams {
    /// Seed dimension for `seeded`.
    pub n: usize,
    /// Degree, or arity for multilinear forms.
    pub m: u32,
    pub vars: usize,
    pub terms: usize,
    pub rng: u64,
    /// Append a shift-periodic tail past `vars` (complex-sparse and seeded).
    pub tail: bool,
}

impl Default for FixtureParams {
    fn default() -> Self {
        Self { n: 0, m: 2, vars: 6, terms: 4, rng: 0, tail: false }
    }
}

/// A generated input: the polynomial (or form) and the seed it comes with.
#[derive(Clone, Debug)]
pub enum Fixture {
    Hom { poly: HomPoly, seed: SeedSpace },
    FiniteType { poly: FiniteTypePoly },
    Multilinear { form: MultilinearForm },
}

impl Fixture {
    pub fn to_json(&self) -> String {
        let value = match self {
            Fixture::Hom { poly, .. } => serde_json::to_value(poly),
            Fixture::FiniteType { poly } => serde_json::to_value(poly),
            Fixture::Multilinear { form } => serde_json::to_value(form),
        };
        serde_json::to_string_pretty(&value.expect("fixtures serialize")).expect("fixtures serialize")
    }

    pub fn seed(&self) -> SeedSpace {
        match self {
            Fixture::Hom { seed, .. } => seed.clone(),
            _ => SeedSpace::empty(),
        }
    }
}

pub fn generate(kind: FixtureKind, params: &FixtureParams, field: Option<Field>) -> Result<Fixture, CliError> {
    let p = params;
    if p.vars == 0 || p.terms == 0 || p.m == 0 {
        return Err(CliError::Usage("--vars, --terms and --m must be positive".into()));
    }
    Ok(match kind {
        FixtureKind::ComplexSparse => {
            let mut poly = seeded(0, p.m, p.vars, p.terms, p.rng)?;
            if p.tail {
                poly = with_random_tail(poly, p.vars, p.rng)?;
            }
            Fixture::Hom { poly, seed: SeedSpace::empty() }
        }
        FixtureKind::Seeded => {
            let mut poly = seeded(p.n, p.m, p.vars, p.terms, p.rng)?;
            if p.tail {
                poly = with_random_tail(poly, p.vars, p.rng)?;
            }
            let seed = SeedSpace::new((1..=p.n).map(|j| SparseVector::unit(Field::Rational, j)).collect())
                .expect("unit vectors are independent");
            Fixture::Hom { poly, seed }
        }
        FixtureKind::FiniteTypeReal => Fixture::FiniteType { poly: finite_type_real(p.terms.min(4), p.m, p.vars, p.rng)? },
        FixtureKind::PositiveDefiniteRealTail => {
            Fixture::Hom { poly: sum_of_squares(field.unwrap_or(Field::Rational)), seed: SeedSpace::empty() }
        }
        FixtureKind::Multilinear => Fixture::Multilinear { form: multilinear(p.m as usize, p.vars, p.terms, p.rng)? },
    })
}

fn small_gaussian(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let re = rng.random_range(-3..=3);
        let im = if rng.random_bool(0.5) { 0 } else { rng.random_range(-3..=3) };
        if re != 0 || im != 0 {
            return Scalar::gauss(re, im);
        }
    }
}

fn small_nonzero(rng: &mut ChaCha8Rng) -> i64 {
    small_sign(rng) * rng.random_range(1..=3)
}

/// `±kᵐ` with `k ∈ {1, 2}`: ratios of such coefficients are `m`-th powers
/// up to sign, so slices between two pure powers have Gaussian-rational roots.
fn power_coefficient(rng: &mut ChaCha8Rng, m: u32) -> Scalar {
    let k: i64 = if rng.random_bool(0.5) { 1 } else { 2 };
    Scalar::int(small_sign(rng) * k.pow(m))
}

fn small_sign(rng: &mut ChaCha8Rng) -> i64 {
    if rng.random_bool(0.5) {
        -1
    } else {
        1
    }
}

/// Degree-`m` polynomial over ℚ(i) in which every monomial involves a
/// variable beyond `n`, so it vanishes on `span{e₁,…,eₙ}`.
///
/// Each variable past `n` carries a pure power `±kᵐ·xⱼᵐ`; on top come
/// `terms` mixed monomials, square-free whenever there are enough
/// variables, with small Gaussian-integer coefficients.
pub fn seeded(n: usize, m: u32, vars: usize, terms: usize, rng_seed: u64) -> Result<HomPoly, CliError> {
    if vars <= n {
        return Err(CliError::Usage(format!("--vars ({vars}) must exceed --n ({n})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut out: Vec<(MultiIndex, Scalar)> = (n + 1..=vars)
        .map(|j| (MultiIndex::new([(j, m)]).expect("1-based"), power_coefficient(&mut rng, m)))
        .collect();
    let target = out.len() + terms;
    let mut attempts = 0;
    while out.len() < target && attempts < 100 * target {
        attempts += 1;
        let lead = rng.random_range(n + 1..=vars);
        let mut mono = vec![lead];
        let square_free = vars >= m as usize && !rng.random_bool(0.2);
        if square_free {
            let others: Vec<usize> = (1..=vars).filter(|&v| v != lead).collect();
            mono.extend(sample(&mut rng, others.len(), m as usize - 1).into_iter().map(|i| others[i]));
        } else {
            mono.extend((1..m).map(|_| rng.random_range(1..=vars)));
        }
        let mono = MultiIndex::from_vars(&mono).expect("1-based");
        if out.iter().all(|(g, _)| g != &mono) {
            out.push((mono, small_gaussian(&mut rng)));
        }
    }
    Ok(HomPoly::new(Field::GaussianRational, m, out)?)
}

/// Adds the tail `Σⱼ (c·xⱼᵐ + d·xⱼᵐ⁻¹xⱼ₊₁)` over `j > offset`, with `c = ±kᵐ`
/// and a Gaussian-integer `d` present about half the time.
pub fn with_random_tail(p: HomPoly, offset: usize, rng_seed: u64) -> Result<HomPoly, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed ^ 0x7a11);
    let m = p.degree();
    let mut gens = vec![(MultiIndex::new([(1, m)]).expect("1-based"), power_coefficient(&mut rng, m))];
    if rng.random_bool(0.5) {
        gens.push((MultiIndex::new([(1, m - 1), (2, 1)]).expect("1-based"), small_gaussian(&mut rng)));
    }
    let tail = TailRule::new(offset, 1, 2, gens)?;
    Ok(p.with_tail(tail)?)
}

/// Real finite-type polynomial `Σ cᵢ φᵢᵐ` with up to three entries per functional.
pub fn finite_type_real(k: usize, m: u32, vars: usize, rng_seed: u64) -> Result<FiniteTypePoly, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let terms = (0..k.max(1))
        .map(|_| {
            let width = rng.random_range(1..=3.min(vars));
            let phi = SparseVector::from_ints(
                Field::Rational,
                &sample(&mut rng, vars, width).into_iter().map(|i| (i + 1, small_nonzero(&mut rng))).collect::<Vec<_>>(),
            );
            (Scalar::int(small_nonzero(&mut rng)), phi)
        })
        .collect();
    Ok(FiniteTypePoly::new(Field::Rational, m, terms)?)
}

/// `Σⱼ xⱼ²` over every coordinate, written as a tail rule.
pub fn sum_of_squares(field: Field) -> HomPoly {
    let square = MultiIndex::from_vars(&[1, 1]).expect("1-based");
    let tail = TailRule::new(0, 1, 1, vec![(square, Scalar::one())]).expect("valid tail");
    HomPoly::zero(field, 2).with_tail(tail).expect("degree matches")
}

/// Random multilinear form with `terms` integer entries on indices `1..=vars`.
pub fn multilinear(arity: usize, vars: usize, terms: usize, rng_seed: u64) -> Result<MultilinearForm, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let entries: Vec<(Vec<usize>, Scalar)> = (0..terms)
        .map(|_| ((0..arity).map(|_| rng.random_range(1..=vars)).collect(), Scalar::int(small_nonzero(&mut rng))))
        .collect();
    Ok(MultilinearForm::new(Field::Rational, arity, entries)?)
}
