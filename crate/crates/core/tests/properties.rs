use std::collections::BTreeMap;

use lineable::builder::{build_zero_space, BuildConfig};
use lineable::polynomials::{
    derived_poly, full_polarization, restrict_to_span, span_scale, HomPoly, MultiIndex, SparseVector, TailRule,
};
use lineable::scalars::{binomial, factorial, Field, Scalar, UniPoly};
use lineable::spaces::{exact_rank, exclude_vector, full_space, kernel_within, SeedSpace};
use lineable::zerofind::binary_slice;
use num_rational::BigRational;
use proptest::prelude::*;

const G: Field = Field::GaussianRational;

fn gauss() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, -4i64..=4, 1i64..=3).prop_map(|(re, im, d)| &Scalar::gauss(re, im) / &Scalar::int(d))
}

fn vector(vars: usize) -> impl Strategy<Value = SparseVector> {
    prop::collection::vec(gauss(), vars).prop_map(|xs| SparseVector::from_entries(G, xs.into_iter().enumerate().map(|(i, x)| (i + 1, x))))
}

fn nonzero_vector(vars: usize) -> impl Strategy<Value = SparseVector> {
    vector(vars).prop_filter("nonzero", |v| !v.is_zero())
}

fn poly(degree: u32, vars: usize) -> impl Strategy<Value = HomPoly> {
    prop::collection::vec((prop::collection::vec(1..=vars, degree as usize), gauss()), 1..6).prop_map(move |terms| {
        HomPoly::new(G, degree, terms.into_iter().map(|(vs, c)| (MultiIndex::from_vars(&vs).unwrap(), c))).unwrap()
    })
}

fn poly_any(max_degree: u32, vars: usize) -> impl Strategy<Value = HomPoly> {
    (2..=max_degree).prop_flat_map(move |m| poly(m, vars))
}

/// Sign-sum oracle `(1/(2ᵐ m!)) Σ_ε (Πεᵢ) P(Σ εⱼ xⱼ)`.
fn sign_sum(p: &HomPoly, args: &[SparseVector]) -> Scalar {
    let m = args.len();
    let mut acc = Scalar::zero();
    for mask in 0..(1u32 << m) {
        let mut x = SparseVector::zero(p.field());
        let mut sign = 1i64;
        for (j, a) in args.iter().enumerate() {
            if mask & (1 << j) != 0 {
                x = x.sub(a);
                sign = -sign;
            } else {
                x = x.add(a);
            }
        }
        acc = &acc + &(&Scalar::int(sign) * &p.evaluate(&x).unwrap());
    }
    let norm = num_bigint::BigInt::from(1u64 << m) * factorial(m as u32);
    &acc / &Scalar::rational(BigRational::from_integer(norm))
}

type CPoly = BTreeMap<Vec<u32>, Scalar>;

fn cmul(a: &CPoly, b: &CPoly) -> CPoly {
    let mut out = CPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let slot = out.entry(e).or_insert_with(Scalar::zero);
            *slot = &*slot + &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Symbolic expansion of `c ↦ P(Σ cᵢ bᵢ)` by multiplying out linear forms.
fn expand_on_span(p: &HomPoly, basis: &[SparseVector]) -> BTreeMap<MultiIndex, Scalar> {
    let q = basis.len();
    let linear = |j: usize| -> CPoly {
        let mut f = CPoly::new();
        for (i, b) in basis.iter().enumerate() {
            let c = b.get(j);
            if !c.is_zero() {
                let mut e = vec![0; q];
                e[i] = 1;
                f.insert(e, c);
            }
        }
        f
    };
    let mut total = CPoly::new();
    for (mono, c) in p.terms() {
        let mut prod: CPoly = [(vec![0; q], c.clone())].into_iter().collect();
        for (v, e) in mono.iter() {
            for _ in 0..e {
                prod = cmul(&prod, &linear(v));
            }
        }
        for (e, x) in prod {
            let slot = total.entry(e).or_insert_with(Scalar::zero);
            *slot = &*slot + &x;
        }
    }
    total
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (MultiIndex::new(e.into_iter().enumerate().map(|(i, k)| (i + 1, k))).unwrap(), c))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn homogeneity(p in poly_any(4, 5), x in vector(5), l in gauss()) {
        let lhs = p.evaluate(&x.scale(&l)).unwrap();
        let rhs = &l.pow(p.degree()) * &p.evaluate(&x).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn polarization_diagonal(p in poly_any(4, 5), x in vector(5)) {
        let args = vec![x.clone(); p.degree() as usize];
        prop_assert_eq!(full_polarization(&p, &args).unwrap(), p.evaluate(&x).unwrap());
    }

    #[test]
    fn polarization_symmetry(p in poly(3, 4), a in vector(4), b in vector(4), c in vector(4)) {
        let base = full_polarization(&p, &[a.clone(), b.clone(), c.clone()]).unwrap();
        prop_assert_eq!(&base, &full_polarization(&p, &[c.clone(), a.clone(), b.clone()]).unwrap());
        prop_assert_eq!(&base, &full_polarization(&p, &[b, a, c]).unwrap());
    }

    #[test]
    fn sign_sum_agrees(p in poly_any(4, 5), xs in prop::collection::vec(vector(5), 4)) {
        let args = &xs[..p.degree() as usize];
        prop_assert_eq!(full_polarization(&p, args).unwrap(), sign_sum(&p, args));
    }

    #[test]
    fn binomial_formula(p in poly_any(4, 5), a in vector(5), b in vector(5)) {
        let m = p.degree();
        let mut sum = Scalar::zero();
        for t in 0..=m {
            let mut args = vec![a.clone(); (m - t) as usize];
            args.extend(std::iter::repeat_n(b.clone(), t as usize));
            let c = Scalar::rational(BigRational::from_integer(binomial(m, t)));
            sum = &sum + &(&c * &full_polarization(&p, &args).unwrap());
        }
        prop_assert_eq!(p.evaluate(&a.add(&b)).unwrap(), sum);
    }

    #[test]
    fn derived_consistency(p in poly(4, 4), u in vector(4), v in vector(4), x in vector(4), t in 1u32..=2) {
        let fixed = vec![(u.clone(), 1), (v.clone(), 3 - t)];
        let q = derived_poly(&p, &fixed, t).unwrap();
        let mut args = vec![u];
        args.extend(std::iter::repeat_n(v, (3 - t) as usize));
        args.extend(std::iter::repeat_n(x.clone(), t as usize));
        prop_assert_eq!(q.evaluate(&x).unwrap(), full_polarization(&p, &args).unwrap());
    }

    #[test]
    fn restriction_matches_expansion(p in poly_any(3, 5), basis in prop::collection::vec(vector(5), 1..=3)) {
        prop_assert_eq!(restrict_to_span(&p, &basis).unwrap(), expand_on_span(&p, &basis));
    }

    #[test]
    fn tail_soundness(
        gens in prop::collection::vec((prop::collection::vec(1usize..=3, 2), gauss()), 1..3),
        offset in 0usize..3,
        period in 1usize..3,
        x in vector(9),
    ) {
        let gens: Vec<_> = gens.into_iter().map(|(vs, c)| (MultiIndex::from_vars(&vs).unwrap(), c)).collect();
        prop_assume!(gens.iter().any(|(_, c)| !c.is_zero()));
        let tail = TailRule::new(offset, period, 3, gens).unwrap();
        let p = HomPoly::zero(G, 2).with_tail(tail).unwrap();
        let n = x.max_index().unwrap_or(1);
        prop_assert_eq!(p.evaluate(&x).unwrap(), p.materialize(n + 3).evaluate(&x).unwrap());
    }

    #[test]
    fn slice_fidelity(p in poly_any(3, 4), u in vector(4), v in vector(4), ts in prop::collection::vec(gauss(), 20)) {
        let s = binary_slice(&p, &u, &v).unwrap();
        let slice: &UniPoly = &s.coefficients;
        for t in ts {
            prop_assert_eq!(slice.eval(&t), p.evaluate(&u.axpy(&t, &v)).unwrap());
        }
    }

    #[test]
    fn kernel_stream_independence(phis in prop::collection::vec(vector(6), 1..4), k in 1usize..30) {
        let mut s = kernel_within(full_space(G), phis.clone(), "kernel");
        let ys = s.take(k).unwrap();
        prop_assert_eq!(exact_rank(&ys), k);
        for y in &ys {
            for phi in &phis {
                prop_assert!(phi.dot(y).is_zero());
            }
        }
    }

    #[test]
    fn exclusion_keeps_vector_out(v in nonzero_vector(6), k in 1usize..20) {
        let mut s = exclude_vector(full_space(G), &v).unwrap();
        let mut ys = s.take(k).unwrap();
        ys.push(v);
        prop_assert_eq!(exact_rank(&ys), k + 1);
    }

    #[test]
    fn complement_decomposition(basis in prop::collection::vec(vector(5), 1..4), z in vector(7)) {
        prop_assume!(exact_rank(&basis) == basis.len());
        let w = SeedSpace::new(basis.clone()).unwrap();
        let (coeffs, y) = w.decompose(&z);
        let mut rebuilt = y.clone();
        for (c, b) in coeffs.iter().zip(&basis) {
            rebuilt = rebuilt.axpy(c, b);
        }
        prop_assert_eq!(rebuilt, z);
        for psi in w.dual_functionals() {
            prop_assert!(psi.dot(&y).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Built certificates: rank n + L and vanishing on the span, via the expansion oracle.
    #[test]
    fn built_spans_vanish(p in poly(2, 5), count in 1usize..5) {
        let cert = build_zero_space(&p, &SeedSpace::empty(), count, &BuildConfig::default()).unwrap();
        let basis = cert.span_basis();
        prop_assert_eq!(exact_rank(&basis), count);
        let table = expand_on_span(&p, &basis);
        if cert.exact {
            prop_assert!(table.is_empty());
        } else {
            let scale = span_scale(&p, &basis);
            prop_assert!(table.values().all(|c| c.abs() <= 1e-9 * scale));
        }
    }
}
