use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::certificate::{
    Certificate, CheckOutcome, CheckRecord, ProvenanceRecord, Target, VerificationMode, VerificationPolicy,
    WitnessRecord, CERTIFICATE_FORMAT,
};
use super::config::BuildConfig;
use super::family::{derived_family, fixed_arguments, DerivedMember};
use crate::error::{Error, Result};
use crate::polynomials::{vanishes_on_span, FiniteTypePoly, HomPoly, MultilinearForm, SparseVector};
use crate::scalars::{binomial, Field, Scalar, Tolerance};
use crate::spaces::{
    direct_complement, exact_rank, exclude_vector, full_space_with, kernel_within, refine_vanishing, NodeKind,
    ProvenanceNode, ProvenanceWriter, SeedSpace, Subspace, VectorSource,
};
use crate::zerofind::{
    find_zero_complex, find_zero_finite_type, is_zero_of, probe_real_definite, RealDiagnosis,
    WitnessMethod, ZeroWitness,
};

/// Scale for approximate checks of a derived polynomial at `y`:
/// `maxcoef(P)·Π‖zᵢ‖₁^βᵢ·‖y‖₁ᵗ`.
pub fn derived_scale(p: &HomPoly, fixed: &[(SparseVector, u32)], y: &SparseVector, t: u32) -> f64 {
    fixed
        .iter()
        .fold(p.max_abs_coeff() * y.l1_norm().powi(t as i32), |acc, (v, b)| acc * v.l1_norm().powi(*b as i32))
}

/// A subspace of `s` on which `q` vanishes.
///
/// Linear forms give kernels. Real tail-free polynomials give the kernel of
/// their support coordinates. Everything else runs a nested construction
/// for `q` inside `s`.
pub fn vanishing_subspace(q: &HomPoly, s: Subspace, depth: usize, config: &Arc<BuildConfig>) -> Result<Subspace> {
    if depth > config.max_depth {
        return Err(Error::DepthExceeded { depth });
    }
    if q.degree() == 0 {
        return Err(Error::ZeroDegree);
    }
    if let Some(phi) = q.as_functional() {
        return Ok(kernel_within(s, vec![phi], format!("kernel of {q}")));
    }
    if q.field() == Field::Rational && q.is_finite() {
        let coords = q.support_vars().into_iter().map(|j| SparseVector::unit(Field::Rational, j)).collect();
        return Ok(kernel_within(s, coords, format!("support coordinates of {q}")));
    }
    let field = s.field().join(q.field());
    let parent = Arc::clone(s.provenance());
    let limits = s.limits();
    let mut inner = BuildSession::within(q.clone(), SeedSpace::empty(), s, Arc::clone(config), depth + 1);
    inner.record_checks = false;
    let kind = NodeKind::VanishingRecursion { polynomial: q.clone(), depth: depth + 1 };
    Ok(Subspace::from_source(field, &parent, limits, kind, Box::new(SessionSource(inner))))
}

#[derive(Clone)]
struct SessionSource(BuildSession);

impl VectorSource for SessionSource {
    fn next_vector(&mut self) -> Result<SparseVector> {
        self.0.step()
    }

    fn clone_box(&self) -> Box<dyn VectorSource> {
        Box::new(self.clone())
    }
}

/// Resumable inductive construction for one polynomial.
///
/// Each [`BuildSession::step`] imposes the derived polynomials of the
/// newest witness, excludes that witness, and finds the next zero.
#[derive(Clone)]
pub struct BuildSession {
    poly: HomPoly,
    functionals: Option<Vec<SparseVector>>,
    seed: SeedSpace,
    config: Arc<BuildConfig>,
    depth: usize,
    stream: Option<Subspace>,
    produced: Vec<SparseVector>,
    witnesses: Vec<ZeroWitness>,
    checks: Vec<CheckRecord>,
    step_nodes: Vec<Arc<ProvenanceNode>>,
    record_checks: bool,
    failure: Option<Error>,
}

impl std::fmt::Debug for BuildSession {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BuildSession")
            .field("poly", &self.poly.to_string())
            .field("depth", &self.depth)
            .field("produced", &self.produced.len())
            .finish()
    }
}

fn check_seed(p: &HomPoly, seed: &SeedSpace) -> Result<()> {
    for v in seed.basis() {
        if !p.field().accepts(v.field()) {
            return Err(Error::FieldMismatch { expected: p.field(), found: v.field() });
        }
    }
    if seed.is_empty() {
        return Ok(());
    }
    let report = vanishes_on_span(p, seed.basis(), Tolerance::default())?;
    match report.witness {
        Some((gamma, c)) => Err(Error::SeedNotInZeroSet { monomial: gamma.to_string(), coefficient: c.to_string() }),
        None => Ok(()),
    }
}

impl BuildSession {
    /// Session over the complement of the seed in the full space.
    pub fn new(poly: HomPoly, seed: SeedSpace, config: BuildConfig) -> Result<Self> {
        config.validate().map_err(Error::InvalidInput)?;
        check_seed(&poly, &seed)?;
        let field = seed.basis().iter().fold(poly.field(), |f, v| f.join(v.field()));
        let ambient = direct_complement(&seed, field, config.limits());
        Ok(Self::within(poly, seed, ambient, Arc::new(config), 0))
    }

    /// Session for a finite-type polynomial, zeros taken from the kernel of its functionals.
    pub fn finite_type(f: &FiniteTypePoly, seed: SeedSpace, config: BuildConfig) -> Result<Self> {
        let mut s = Self::new(f.to_hompoly(), seed, config)?;
        s.functionals = Some(f.functionals().cloned().collect());
        Ok(s)
    }

    /// Session drawing from `ambient`, which must meet the seed span only in 0.
    pub fn within(poly: HomPoly, seed: SeedSpace, ambient: Subspace, config: Arc<BuildConfig>, depth: usize) -> Self {
        Self {
            poly,
            functionals: None,
            seed,
            config,
            depth,
            stream: Some(ambient),
            produced: Vec::new(),
            witnesses: Vec::new(),
            checks: Vec::new(),
            step_nodes: Vec::new(),
            record_checks: true,
            failure: None,
        }
    }

    pub fn poly(&self) -> &HomPoly {
        &self.poly
    }

    pub fn seed(&self) -> &SeedSpace {
        &self.seed
    }

    pub fn produced(&self) -> &[SparseVector] {
        &self.produced
    }

    pub fn witnesses(&self) -> &[ZeroWitness] {
        &self.witnesses
    }

    pub fn checks(&self) -> &[CheckRecord] {
        &self.checks
    }

    pub fn config(&self) -> &BuildConfig {
        &self.config
    }

    /// Whether every produced vector and witness so far is exact.
    pub fn is_exact(&self) -> bool {
        self.witnesses.iter().all(|w| w.exact) && self.produced.iter().all(SparseVector::is_exact)
    }

    /// Runs one step and returns the new vector. After a failure every later call repeats it.
    pub fn step(&mut self) -> Result<SparseVector> {
        if let Some(e) = &self.failure {
            return Err(e.clone());
        }
        let k = self.produced.len() + 1;
        match self.step_inner(k) {
            Ok(y) => Ok(y),
            Err(e) => {
                let e = e.at_step(k, (self.depth > 0).then(|| format!("nested construction for {}", self.poly)));
                self.failure = Some(e.clone());
                Err(e)
            }
        }
    }

    pub fn run(&mut self, count: usize) -> Result<()> {
        for _ in 0..count {
            self.step()?;
        }
        Ok(())
    }

    fn step_inner(&mut self, k: usize) -> Result<SparseVector> {
        let family = derived_family(&self.poly, self.seed.basis(), &self.produced)?;
        let stream = self.stream.take().ok_or_else(|| Error::CheckFailed("stream lost after a failure".into()))?;
        let conditions: Vec<HomPoly> = family.iter().map(|m| m.poly.clone()).collect();
        let config = Arc::clone(&self.config);
        let depth = self.depth;
        let mut y_stream = refine_vanishing(stream, &conditions, &format!("derived polynomials of step {k}"), |q, s| {
            vanishing_subspace(q, s, depth, &config)
        })?;
        if let Some(prev) = self.produced.last() {
            y_stream = exclude_vector(y_stream, prev)?;
        }
        let (witness, y_stream) = self.find_zero(y_stream)?;
        let y = witness.vector.clone();
        self.confirm_zero(&witness)?;
        if self.record_checks {
            self.record_family_checks(k, &family, &y)?;
        }
        self.step_nodes.push(Arc::clone(y_stream.provenance()));
        self.stream = Some(y_stream);
        self.witnesses.push(witness);
        self.produced.push(y.clone());
        Ok(y)
    }

    fn find_zero(&self, mut s: Subspace) -> Result<(ZeroWitness, Subspace)> {
        let p = &self.poly;
        if let Some(phi) = p.as_functional() {
            let mut k = kernel_within(s, vec![phi], format!("kernel of {p}"));
            let y = k.next_basis_vector()?;
            let exact = y.is_exact();
            return Ok((ZeroWitness { method: WitnessMethod::Kernel, vector: y, slice: None, exact }, k));
        }
        if let Some(fs) = &self.functionals {
            let f = FiniteTypePoly::new(p.field(), p.degree(), fs.iter().map(|phi| (Scalar::one(), phi.clone())).collect())?;
            return find_zero_finite_type(&f, s);
        }
        if p.field() == Field::Rational {
            if p.is_finite() {
                let coords = p.support_vars().into_iter().map(|j| SparseVector::unit(Field::Rational, j)).collect();
                let mut k = kernel_within(s, coords, format!("support coordinates of {p}"));
                let y = k.next_basis_vector()?;
                let exact = y.is_exact();
                return Ok((ZeroWitness { method: WitnessMethod::Kernel, vector: y, slice: None, exact }, k));
            }
            let diagnosis = probe_real_definite(p, &mut s, self.config.probe_pairs, &self.config.zero_find().root_search)?;
            return match diagnosis {
                RealDiagnosis::RootFound { witness, slice } => {
                    let exact = witness.is_exact();
                    Ok((ZeroWitness { method: WitnessMethod::Probe, vector: witness, slice: slice.map(|b| *b), exact }, s))
                }
                RealDiagnosis::NoRealRootOnProbedSlices { slices, discriminants } => {
                    let negative = discriminants
                        .iter()
                        .flatten()
                        .filter(|d| d.as_exact().is_some_and(|g| g.is_real() && g.re < num_rational::BigRational::from_integer(0.into())))
                        .count();
                    Err(Error::NoRealZero {
                        diagnosis: diagnosis_name(),
                        detail: format!(
                            "{} slices probed, {} with negative discriminant; first slice {}",
                            slices.len(),
                            negative,
                            slices.first().map(|s| s.coefficients.to_string()).unwrap_or_default()
                        ),
                    })
                }
            };
        }
        let w = find_zero_complex(p, &mut s, &self.config.zero_find())?;
        Ok((w, s))
    }

    fn confirm_zero(&self, w: &ZeroWitness) -> Result<()> {
        let ok = if w.exact {
            self.poly.evaluate(&w.vector)?.is_zero()
        } else {
            is_zero_of(&self.poly, &w.vector, self.config.tolerance())?
        };
        if ok && !w.vector.is_zero() {
            Ok(())
        } else {
            Err(Error::CheckFailed(format!("witness {} is not a zero of {}", w.vector, self.poly)))
        }
    }

    fn record_family_checks(&mut self, k: usize, family: &[DerivedMember], y: &SparseVector) -> Result<()> {
        let combined: Vec<SparseVector> = self.seed.basis().iter().chain(&self.produced).cloned().collect();
        for m in family {
            let value = m.poly.evaluate(y)?;
            let (outcome, residual) = if value.is_exact() {
                if !value.is_zero() {
                    return Err(Error::CheckFailed(format!("derived polynomial {} does not vanish at step {k}", m.poly)));
                }
                (CheckOutcome::ExactZero, None)
            } else {
                let fixed = fixed_arguments(&m.fixed, &combined)?;
                let scale = derived_scale(&self.poly, &fixed, y, m.degree);
                if value.abs() > self.config.tolerance * scale {
                    return Err(Error::CheckFailed(format!("derived polynomial {} exceeds tolerance at step {k}", m.poly)));
                }
                (CheckOutcome::WithinTolerance, Some(value.abs() / scale.max(f64::MIN_POSITIVE)))
            };
            self.checks.push(CheckRecord { step: k, polynomial: 0, degree: m.degree, fixed: m.fixed.clone(), outcome, residual });
        }
        Ok(())
    }

    fn provenance_record(&self) -> ProvenanceRecord {
        let mut w = ProvenanceWriter::new();
        let steps = self.step_nodes.iter().map(|n| w.add(n)).collect();
        ProvenanceRecord { nodes: w.finish(), steps }
    }

    /// Certificate for the vectors produced so far.
    pub fn certificate(&self, target: Target) -> Certificate {
        let polys = target.polynomials();
        let max_degree = polys.iter().map(|p| p.degree()).max().unwrap_or(1);
        let dim = self.seed.dim() + self.produced.len();
        let verification = verification_policy(&self.config, dim, max_degree);
        let polynomial_index = polys.len().saturating_sub(1);
        Certificate {
            format: CERTIFICATE_FORMAT.to_string(),
            seed: self.seed.basis().to_vec(),
            produced: self.produced.clone(),
            zero_witnesses: self
                .witnesses
                .iter()
                .enumerate()
                .map(|(i, w)| WitnessRecord { step: i + 1, witness: w.clone() })
                .collect(),
            checks: self.checks.iter().map(|c| CheckRecord { polynomial: polynomial_index, ..c.clone() }).collect(),
            verification,
            exact: self.is_exact() && self.seed.basis().iter().all(SparseVector::is_exact),
            provenance: self.provenance_record(),
            polynomial: target,
        }
    }
}

fn diagnosis_name() -> String {
    RealDiagnosis::NoRealRootOnProbedSlices { slices: Vec::new(), discriminants: Vec::new() }.name().to_string()
}

/// Full table when `C(dim+m−1, m)` is within the threshold, sampling otherwise.
pub fn verification_policy(config: &BuildConfig, dim: usize, degree: u32) -> VerificationPolicy {
    let table = binomial((dim + degree as usize).saturating_sub(1) as u32, degree);
    let full = table <= BigInt::from(config.full_table_threshold);
    if full {
        VerificationPolicy { mode: VerificationMode::FullTable, tolerance: config.tolerance, samples: None, rng_seed: None }
    } else {
        VerificationPolicy {
            mode: VerificationMode::Sampled,
            tolerance: config.tolerance,
            samples: Some(config.sample_count),
            rng_seed: Some(config.rng_seed),
        }
    }
}

/// Random small-integer combinations of `basis`, reproducible from `seed`.
pub fn sample_combinations(basis: &[SparseVector], count: usize, seed: u64) -> Vec<SparseVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = basis.iter().fold(Field::Rational, |f, v| f.join(v.field()));
    (0..count)
        .map(|_| {
            basis.iter().fold(SparseVector::zero(field), |acc, b| acc.axpy(&Scalar::int(rng.random_range(-3..=3)), b))
        })
        .collect()
}

/// Rank and vanishing checks the builder runs before emitting a certificate.
fn self_check(cert: &Certificate) -> Result<()> {
    let basis = cert.span_basis();
    if exact_rank(&basis) != basis.len() {
        return Err(Error::CheckFailed("produced vectors are dependent".into()));
    }
    let tol = Tolerance::new(cert.verification.tolerance);
    for p in cert.polynomial.polynomials() {
        if basis.is_empty() {
            continue;
        }
        let ok = match cert.verification.mode {
            VerificationMode::FullTable => vanishes_on_span(p, &basis, tol)?.vanishes,
            VerificationMode::Sampled => {
                let samples = sample_combinations(&basis, cert.verification.samples.unwrap_or(0), cert.verification.rng_seed.unwrap_or(0));
                samples.iter().try_fold(true, |ok, z| Ok::<_, Error>(ok && is_zero_of(p, z, tol)?))?
            }
        };
        if !ok {
            return Err(Error::CheckFailed(format!("{p} does not vanish on the produced span")));
        }
    }
    Ok(())
}

/// Extends `seed` by `count` vectors inside the zero set of `p`.
pub fn build_zero_space(p: &HomPoly, seed: &SeedSpace, count: usize, config: &BuildConfig) -> Result<Certificate> {
    let mut session = BuildSession::new(p.clone(), seed.clone(), config.clone())?;
    session.run(count)?;
    let cert = session.certificate(Target::Homogeneous { poly: p.clone(), finite_type: None });
    self_check(&cert)?;
    Ok(cert)
}

/// As [`build_zero_space`], drawing zeros from the kernel of `f`'s functionals.
pub fn build_finite_type(f: &FiniteTypePoly, seed: &SeedSpace, count: usize, config: &BuildConfig) -> Result<Certificate> {
    let mut session = BuildSession::finite_type(f, seed.clone(), config.clone())?;
    session.run(count)?;
    let cert = session.certificate(Target::Homogeneous { poly: f.to_hompoly(), finite_type: Some(f.clone()) });
    self_check(&cert)?;
    Ok(cert)
}

/// Common zeros of several polynomials: each construction draws from the previous one.
pub fn build_intersection(polys: &[HomPoly], seed: &SeedSpace, count: usize, config: &BuildConfig) -> Result<Certificate> {
    let (first, rest) = polys.split_first().ok_or_else(|| Error::InvalidInput("no polynomials".into()))?;
    for (i, p) in polys.iter().enumerate() {
        check_seed(p, seed).map_err(|e| e.in_polynomial(i + 1))?;
    }
    let mut session = BuildSession::new(first.clone(), seed.clone(), config.clone()).map_err(|e| e.in_polynomial(1))?;
    for (i, p) in rest.iter().enumerate() {
        let previous = session;
        let field = p.field().join(previous.poly.field());
        let parent = Arc::clone(previous.stream.as_ref().expect("fresh session").provenance());
        let kind = NodeKind::VanishingRecursion { polynomial: previous.poly.clone(), depth: 0 };
        let limits = config.limits();
        let ambient = Subspace::from_source(field, &parent, limits, kind, Box::new(IndexedSource(previous, i + 1)));
        session = BuildSession::within(p.clone(), seed.clone(), ambient, Arc::new(config.clone()), 0);
    }
    session.run(count).map_err(|e| e.in_polynomial(polys.len()))?;
    let cert = session.certificate(Target::Intersection { polys: polys.to_vec() });
    self_check(&cert)?;
    Ok(cert)
}

/// Session wrapper that tags failures with the polynomial's position in a chain.
#[derive(Clone)]
struct IndexedSource(BuildSession, usize);

impl VectorSource for IndexedSource {
    fn next_vector(&mut self) -> Result<SparseVector> {
        self.0.step().map_err(|e| e.in_polynomial(self.1))
    }

    fn clone_box(&self) -> Box<dyn VectorSource> {
        Box::new(self.clone())
    }
}

/// Extends the line through `x` inside the zero set of `p`.
pub fn build_through_point(p: &HomPoly, x: &SparseVector, count: usize, config: &BuildConfig) -> Result<Certificate> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let value = p.evaluate(x)?;
    let zero = if value.is_exact() { value.is_zero() } else { is_zero_of(p, x, config.tolerance())? };
    if !zero {
        return Err(Error::PointNotAZero { value: value.to_string() });
    }
    build_zero_space(p, &SeedSpace::new(vec![x.clone()])?, count, config)
}

/// Vectors `z` such that `A` vanishes whenever `z` fills `slot`, whatever the other arguments.
///
/// The conditions are the linear forms `x ↦ A(…, x at slot, …)` with the
/// other slots set to unit vectors from the coefficient table.
pub fn build_multilinear(a: &MultilinearForm, slot: Option<usize>, count: usize, config: &BuildConfig) -> Result<Certificate> {
    config.validate().map_err(Error::InvalidInput)?;
    if a.arity() < 2 {
        return Err(Error::ArityMismatch { expected: 2, found: a.arity() });
    }
    let slot = match slot {
        Some(j) if j < a.arity() => j,
        Some(j) => return Err(Error::ArityMismatch { expected: a.arity(), found: j + 1 }),
        None => a
            .first_infinite_slot()
            .ok_or_else(|| Error::InvalidInput("every slot is finite-dimensional".into()))?,
    };
    if a.slot_dims()[slot].is_some() {
        return Err(Error::InvalidInput(format!("slot {} is finite-dimensional", slot + 1)));
    }
    let conditions: Vec<HomPoly> = a
        .other_slot_assignments(slot)
        .iter()
        .map(|others| HomPoly::from_functional(&a.slot_functional(slot, others)))
        .filter(|q| !q.is_zero())
        .collect();
    let ambient = full_space_with(a.field(), config.limits());
    let mut z = refine_vanishing(ambient, &conditions, "slot functionals", |q, s| {
        let phi = q.as_functional().expect("linear condition");
        Ok(kernel_within(s, vec![phi], format!("kernel of {q}")))
    })?;
    let mut produced = Vec::with_capacity(count);
    let mut witnesses = Vec::with_capacity(count);
    for step in 1..=count {
        let y = z.next_basis_vector().map_err(|e| e.at_step(step, None))?;
        witnesses.push(WitnessRecord {
            step,
            witness: ZeroWitness { method: WitnessMethod::Kernel, exact: y.is_exact(), vector: y.clone(), slice: None },
        });
        produced.push(y);
    }
    let mut w = ProvenanceWriter::new();
    let node = w.add(z.provenance());
    let exact = produced.iter().all(SparseVector::is_exact);
    Ok(Certificate {
        format: CERTIFICATE_FORMAT.to_string(),
        polynomial: Target::Multilinear { form: a.clone(), slot },
        seed: Vec::new(),
        produced,
        zero_witnesses: witnesses,
        checks: Vec::new(),
        verification: verification_policy(config, count, a.arity() as u32),
        exact,
        provenance: ProvenanceRecord { nodes: w.finish(), steps: vec![node; count] },
    })
}

/// Number of entries of the full polarization table, for reporting.
pub fn table_size(dim: usize, degree: u32) -> Option<u64> {
    binomial((dim + degree as usize).saturating_sub(1) as u32, degree).to_u64()
}
