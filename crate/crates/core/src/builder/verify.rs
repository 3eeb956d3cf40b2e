//! Independent re-checking of certificate files.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::certificate::{Certificate, CheckOutcome, Target, VerificationMode, CERTIFICATE_FORMAT};
use super::family::{derived_shapes, fixed_arguments, DerivedKey};
use super::session::{derived_scale, sample_combinations};
use crate::polynomials::{derived_poly, vanishes_on_span, HomPoly, MultilinearForm, SparseVector};
use crate::scalars::{Scalar, Tolerance};
use crate::spaces::{exact_rank, flat_lineage, FlatNode, NodeKind};
use crate::zerofind::zero_scale;

/// One failed check; `name` is stable and machine-readable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationFailure {
    pub name: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub failures: Vec<VerificationFailure>,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Distinct failure names in order of first occurrence.
    pub fn names(&self) -> Vec<&'static str> {
        let mut seen = BTreeSet::new();
        self.failures.iter().map(|f| f.name).filter(|n| seen.insert(*n)).collect()
    }

    pub fn has(&self, name: &str) -> bool {
        self.failures.iter().any(|f| f.name == name)
    }

    fn fail(&mut self, name: &'static str, detail: impl Into<String>) {
        self.failures.push(VerificationFailure { name, detail: detail.into() });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return f.write_str("ok");
        }
        for (i, x) in self.failures.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{}: {}", x.name, x.detail)?;
        }
        Ok(())
    }
}

/// Whether `value` is zero at the certificate's level.
fn negligible(value: &Scalar, tol: Tolerance, scale: f64) -> bool {
    value.is_negligible(tol.epsilon * scale)
}

struct Checker<'a> {
    cert: &'a Certificate,
    tol: Tolerance,
    report: VerificationReport,
}

/// Re-runs every certificate invariant and reports all failures.
pub fn verify_certificate(cert: &Certificate) -> VerificationReport {
    let tol = if cert.exact { Tolerance::exact() } else { Tolerance::new(cert.verification.tolerance) };
    let mut c = Checker { cert, tol, report: VerificationReport::default() };
    c.structure();
    c.exactness_flag();
    c.rank();
    match &cert.polynomial {
        Target::Homogeneous { poly, .. } => {
            c.vanishes_on_span(&[poly]);
            c.zero_witnesses(poly);
            c.mixed_polarization(&[poly]);
            c.missing_checks(poly);
            c.chain_discipline();
        }
        Target::Intersection { polys } => {
            let refs: Vec<&HomPoly> = polys.iter().collect();
            c.vanishes_on_span(&refs);
            if let Some(last) = polys.last() {
                c.zero_witnesses(last);
                c.missing_checks(last);
            }
            c.mixed_polarization(&refs);
            c.chain_discipline();
        }
        Target::Multilinear { form, slot } => c.multilinear(form, *slot),
    }
    c.membership();
    c.report
}

impl Checker<'_> {
    fn structure(&mut self) {
        let cert = self.cert;
        let l = cert.produced.len();
        if cert.format != CERTIFICATE_FORMAT {
            self.report.fail("structure", format!("unknown format {:?}", cert.format));
        }
        if cert.zero_witnesses.len() != l {
            self.report.fail("structure", format!("{} witnesses for {l} produced vectors", cert.zero_witnesses.len()));
        }
        for (i, w) in cert.zero_witnesses.iter().enumerate() {
            if w.step != i + 1 {
                self.report.fail("structure", format!("witness {} is labelled step {}", i + 1, w.step));
            }
        }
        if cert.provenance.steps.len() != l {
            self.report.fail("structure", format!("{} provenance steps for {l} produced vectors", cert.provenance.steps.len()));
        }
        for (i, &id) in cert.provenance.steps.iter().enumerate() {
            if flat_lineage(&cert.provenance.nodes, id).is_none() {
                self.report.fail("structure", format!("step {} names a broken provenance node {id}", i + 1));
            }
        }
        let polys = cert.polynomial.polynomials().len();
        for ch in &cert.checks {
            if ch.step == 0 || ch.step > l || ch.polynomial >= polys.max(1) {
                self.report.fail("structure", format!("check refers to step {} of polynomial {}", ch.step, ch.polynomial));
            }
        }
        if cert.seed.iter().chain(&cert.produced).any(SparseVector::is_zero) {
            self.report.fail("structure", "zero vector in the basis");
        }
        if let Target::Multilinear { form, slot } = &cert.polynomial {
            if *slot >= form.arity() {
                self.report.fail("structure", format!("slot {slot} out of range"));
            }
        }
    }

    fn exactness_flag(&mut self) {
        let cert = self.cert;
        let vectors_exact = cert.seed.iter().chain(&cert.produced).all(SparseVector::is_exact);
        let witnesses_exact = cert.zero_witnesses.iter().all(|w| w.witness.exact && w.witness.vector.is_exact());
        let checks_exact = cert.checks.iter().all(|c| c.outcome == CheckOutcome::ExactZero);
        let polys_exact = match &cert.polynomial {
            Target::Multilinear { form, .. } => form.table().values().all(Scalar::is_exact),
            t => t.polynomials().iter().all(|p| p.is_exact()),
        };
        let actual = vectors_exact && witnesses_exact && checks_exact && polys_exact;
        if cert.exact != actual {
            self.report.fail(
                "exactness_flag",
                format!("certificate claims exact = {} but its contents are {}", cert.exact, if actual { "exact" } else { "approximate" }),
            );
        }
        for w in &cert.zero_witnesses {
            if w.witness.exact && !w.witness.vector.is_exact() {
                self.report.fail("exactness_flag", format!("witness {} claims exactness with approximate entries", w.step));
            }
        }
    }

    fn rank(&mut self) {
        let basis = self.cert.span_basis();
        let r = exact_rank(&basis);
        if r != basis.len() {
            self.report.fail("rank", format!("rank {r} but {} vectors", basis.len()));
        }
    }

    fn vanishes_on_span(&mut self, polys: &[&HomPoly]) {
        let basis = self.cert.span_basis();
        if basis.is_empty() {
            return;
        }
        let policy = &self.cert.verification;
        for (i, p) in polys.iter().enumerate() {
            match policy.mode {
                VerificationMode::FullTable => match vanishes_on_span(p, &basis, self.tol) {
                    Ok(r) if r.vanishes => {}
                    Ok(r) => {
                        let (gamma, c) = r.witness.expect("witness on failure");
                        self.report.fail("vanishes_on_span", format!("polynomial {i}: coefficient {c} at {gamma}"));
                    }
                    Err(e) => self.report.fail("vanishes_on_span", format!("polynomial {i}: {e}")),
                },
                VerificationMode::Sampled => {
                    let samples =
                        sample_combinations(&basis, policy.samples.unwrap_or(0), policy.rng_seed.unwrap_or(0));
                    if policy.samples.unwrap_or(0) == 0 {
                        self.report.fail("vanishes_on_span", "sampled policy without samples");
                    }
                    for (s, z) in samples.iter().enumerate() {
                        match p.evaluate(z) {
                            Ok(v) if negligible(&v, self.tol, zero_scale(p, z)) => {}
                            Ok(v) => {
                                self.report.fail("vanishes_on_span", format!("polynomial {i}: sample {s} gives {v}"));
                                break;
                            }
                            Err(e) => {
                                self.report.fail("vanishes_on_span", format!("polynomial {i}: {e}"));
                                break;
                            }
                        }
                    }
                }
            }
        }
    }

    fn zero_witnesses(&mut self, p: &HomPoly) {
        let cert = self.cert;
        for (i, rec) in cert.zero_witnesses.iter().enumerate() {
            let w = &rec.witness;
            let Some(y) = cert.produced.get(i) else { break };
            if !vectors_match(&w.vector, y, self.tol) {
                self.report.fail("zero_witness", format!("step {}: witness differs from the produced vector", i + 1));
                continue;
            }
            if let Some(slice) = &w.slice {
                if !vectors_match(&slice.point(), y, self.tol) {
                    self.report.fail("zero_witness", format!("step {}: u + t·v does not give the produced vector", i + 1));
                }
            }
            match p.evaluate(y) {
                Ok(v) if negligible(&v, self.tol, zero_scale(p, y)) => {}
                Ok(v) => self.report.fail("zero_witness", format!("step {}: P(y) = {v}", i + 1)),
                Err(e) => self.report.fail("zero_witness", format!("step {}: {e}", i + 1)),
            }
        }
    }

    fn mixed_polarization(&mut self, polys: &[&HomPoly]) {
        let cert = self.cert;
        let combined = cert.span_basis();
        for ch in &cert.checks {
            let (Some(p), Some(y)) = (polys.get(ch.polynomial), ch.step.checked_sub(1).and_then(|i| cert.produced.get(i)))
            else {
                continue;
            };
            let label = format!("step {} degree {} fixed {}", ch.step, ch.degree, ch.fixed);
            let result = fixed_arguments(&ch.fixed, &combined).and_then(|fixed| {
                let q = derived_poly(p, &fixed, ch.degree)?;
                Ok((q.evaluate(y)?, derived_scale(p, &fixed, y, ch.degree)))
            });
            match result {
                Ok((v, scale)) if negligible(&v, self.tol, scale) => {}
                Ok((v, _)) => self.report.fail("mixed_polarization", format!("{label}: value {v}")),
                Err(e) => self.report.fail("mixed_polarization", format!("{label}: {e}")),
            }
        }
    }

    fn missing_checks(&mut self, p: &HomPoly) {
        let cert = self.cert;
        let n = cert.seed.len();
        let combined = cert.span_basis();
        let recorded: BTreeSet<(usize, DerivedKey)> = cert
            .checks
            .iter()
            .map(|c| (c.step, DerivedKey { degree: c.degree, fixed: c.fixed.clone() }))
            .collect();
        for k in 1..=cert.produced.len() {
            for (t, fixed) in derived_shapes(p.degree(), n, k - 1) {
                let Ok(args) = fixed_arguments(&fixed, &combined) else { continue };
                let Ok(q) = derived_poly(p, &args, t) else { continue };
                if q.is_zero() {
                    continue;
                }
                if !recorded.contains(&(k, DerivedKey { degree: t, fixed: fixed.clone() })) {
                    self.report.fail("missing_check", format!("step {k}: no check for degree {t} fixed {fixed}"));
                }
            }
        }
    }

    fn chain_discipline(&mut self) {
        let cert = self.cert;
        for k in 2..=cert.produced.len() {
            let prev = &cert.produced[k - 2];
            let Some(lineage) = cert.provenance.steps.get(k - 1).and_then(|&id| flat_lineage(&cert.provenance.nodes, id))
            else {
                continue;
            };
            let excluded = lineage.iter().any(|n| {
                matches!(&n.kind, NodeKind::Exclude { coordinate, excluded }
                    if vectors_match(excluded, prev, self.tol) && !negligible(&prev.get(*coordinate), self.tol, prev.max_abs()))
            });
            if !excluded {
                self.report.fail("chain_discipline", format!("step {k} does not exclude the previous vector"));
            }
        }
    }

    fn membership(&mut self) {
        let cert = self.cert;
        for (i, y) in cert.produced.iter().enumerate() {
            let Some(lineage) = cert.provenance.steps.get(i).and_then(|&id| flat_lineage(&cert.provenance.nodes, id))
            else {
                continue;
            };
            for node in lineage {
                if let Some(msg) = self.node_violation(node, y) {
                    self.report.fail("membership", format!("step {} node {}: {msg}", i + 1, node.id));
                }
            }
        }
    }

    fn node_violation(&self, node: &FlatNode, y: &SparseVector) -> Option<String> {
        match &node.kind {
            NodeKind::Full { field } => (!field.accepts(y.field())).then(|| format!("vector over {} in a space over {field}", y.field())),
            NodeKind::Refine { .. } => None,
            NodeKind::Kernel { functionals, label } => functionals.iter().find_map(|phi| {
                let v = phi.dot(y);
                (!negligible(&v, self.tol, phi.l1_norm() * y.l1_norm())).then(|| format!("{label}: functional value {v}"))
            }),
            NodeKind::Exclude { coordinate, excluded } => {
                if negligible(&excluded.get(*coordinate), self.tol, excluded.max_abs()) {
                    Some(format!("excluded vector has no entry at coordinate {coordinate}"))
                } else if !negligible(&y.get(*coordinate), self.tol, y.max_abs()) {
                    Some(format!("coordinate {coordinate} is not zero"))
                } else {
                    None
                }
            }
            NodeKind::VanishingRecursion { polynomial, .. } => match polynomial.evaluate(y) {
                Ok(v) if negligible(&v, self.tol, zero_scale(polynomial, y)) => None,
                Ok(v) => Some(format!("{polynomial} takes value {v}")),
                Err(e) => Some(e.to_string()),
            },
        }
    }

    fn multilinear(&mut self, a: &MultilinearForm, slot: usize) {
        let produced = &self.cert.produced;
        if slot >= a.arity() || produced.is_empty() {
            return;
        }
        for others in a.other_slot_assignments(slot) {
            let phi = a.slot_functional(slot, &others);
            for (i, z) in produced.iter().enumerate() {
                let v = phi.dot(z);
                if !negligible(&v, self.tol, phi.l1_norm() * z.l1_norm()) {
                    self.report.fail("multilinear_vanishing", format!("vector {} in slot {}: value {v} with others {others:?}", i + 1, slot + 1));
                }
            }
        }
        let m = a.arity();
        let l = produced.len();
        let scale = a.table().values().map(Scalar::abs).fold(0.0, f64::max)
            * produced.iter().map(SparseVector::l1_norm).fold(0.0, f64::max).powi(m as i32);
        let mut idx = vec![0usize; m];
        loop {
            let args: Vec<SparseVector> = idx.iter().map(|&i| produced[i].clone()).collect();
            match a.eval(&args) {
                Ok(v) if negligible(&v, self.tol, scale) => {}
                Ok(v) => self.report.fail("multilinear_vanishing", format!("tuple {idx:?}: value {v}")),
                Err(e) => self.report.fail("multilinear_vanishing", format!("tuple {idx:?}: {e}")),
            }
            let mut pos = 0;
            loop {
                if pos == m {
                    return;
                }
                idx[pos] += 1;
                if idx[pos] < l {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

fn vectors_match(a: &SparseVector, b: &SparseVector, tol: Tolerance) -> bool {
    if a.is_exact() && b.is_exact() {
        return a == b;
    }
    a.approx_eq(b, tol.epsilon.max(1e-12) * a.max_abs().max(b.max_abs()))
}
