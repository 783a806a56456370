//! Property tests for the module invariants: exact arithmetic laws, normal
//! form linearity, multiplication-matrix identities, subspace/ideal
//! closure, inertia invariance, and the degree parity law.

use std::sync::OnceLock;

use num_traits::Zero;
use proptest::prelude::*;

use phindex_core::algebra::{AlgebraElement, QuotientAlgebra};
use phindex_core::expr::{
    cofactor, gradient, hessian_det, jacobian_det, parse_poly, rat, Monomial, Polynomial, Rat,
    VectorField,
};
use phindex_core::forms::inertia;
use phindex_core::linalg::QMat;
use phindex_core::oracle::{local_degree, OracleConfig};
use phindex_core::sbasis::{standard_basis, MonomialOrder};

fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn polys(texts: &[&str], v: &[String]) -> Vec<Polynomial> {
    texts.iter().map(|t| parse_poly(t, v).unwrap()).collect()
}

fn arb_poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, nvars), -4i64..=4i64),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        Polynomial::from_terms(nvars, terms.into_iter().map(|(e, c)| (Monomial(e), rat(c))))
    })
}

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

/// Shared fixture pool of finite-dimensional local algebras.
fn algebra_pool() -> &'static Vec<QuotientAlgebra> {
    static POOL: OnceLock<Vec<QuotientAlgebra>> = OnceLock::new();
    POOL.get_or_init(|| {
        let v = vars(&["x", "y"]);
        let gens_list: Vec<Vec<Polynomial>> = vec![
            polys(&["x", "y"], &v),
            polys(&["x^2", "y^3"], &v),
            gradient(&parse_poly("x^3 - y^2", &v).unwrap()),
            gradient(&parse_poly("x^3 + y^3", &v).unwrap()),
            gradient(&parse_poly("x^2 + y^4", &v).unwrap()),
            polys(&["x^2 - y^3", "x*y"], &v),
        ];
        gens_list
            .into_iter()
            .map(|g| QuotientAlgebra::build(&g).unwrap())
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms(a in arb_poly(2, 3, 4), b in arb_poly(2, 3, 4), c in arb_poly(2, 3, 4)) {
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        if !b.is_zero() {
            let q = a.mul(&b).exact_div(&b).expect("product divides");
            prop_assert_eq!(q, a.clone());
        }
    }

    #[test]
    fn gradient_is_linear(f in arb_poly(2, 4, 4), g in arb_poly(2, 4, 4),
                          alpha in arb_rat(), beta in arb_rat()) {
        let lhs = gradient(&f.scale(&alpha).add(&g.scale(&beta)));
        let gf = gradient(&f);
        let gg = gradient(&g);
        for i in 0..2 {
            prop_assert_eq!(lhs[i].clone(), gf[i].scale(&alpha).add(&gg[i].scale(&beta)));
        }
    }

    #[test]
    fn cofactor_reconstructs_exactly(f in arb_poly(2, 3, 3), p in arb_poly(2, 2, 3),
                                     y0 in arb_poly(2, 2, 3), y1 in arb_poly(2, 2, 3)) {
        // every field of the form p*X_f + f*Y is tangent to f
        prop_assume!(!f.is_zero());
        let grad = gradient(&f);
        let x = VectorField::new(vec![
            grad[1].mul(&p).add(&f.mul(&y0)),
            grad[0].neg().mul(&p).add(&f.mul(&y1)),
        ]);
        let h = cofactor(&x, &f).expect("constructed field is tangent");
        prop_assert_eq!(f.mul(&h), x.apply(&f));
    }

    #[test]
    fn jacobian_of_gradient_is_hessian(f in arb_poly(3, 4, 5)) {
        let field = VectorField::new(gradient(&f));
        prop_assert_eq!(jacobian_det(&field), hessian_det(&f));
    }

    #[test]
    fn parser_round_trips(p in arb_poly(2, 4, 5)) {
        let v = vars(&["x", "y"]);
        let text = p.render(&v);
        prop_assert_eq!(parse_poly(&text, &v).unwrap(), p);
    }

    #[test]
    fn normal_form_is_idempotent_and_linear(idx in 0usize..6,
                                            p in arb_poly(2, 5, 5),
                                            q in arb_poly(2, 5, 5),
                                            alpha in arb_rat(), beta in arb_rat()) {
        let a = &algebra_pool()[idx];
        let nf = |t: &Polynomial| a.engine().normal_form(t).unwrap();
        let np = nf(&p);
        prop_assert_eq!(nf(&np), np.clone());
        let combo = nf(&p.scale(&alpha).add(&q.scale(&beta)));
        prop_assert_eq!(combo, np.scale(&alpha).add(&nf(&q).scale(&beta)));
    }

    #[test]
    fn ideal_members_reduce_to_zero(idx in 0usize..6, p in arb_poly(2, 4, 4)) {
        let a = &algebra_pool()[idx];
        for g in a.engine().original_generators() {
            prop_assert!(a.engine().normal_form(&g.mul(&p)).unwrap().is_zero());
        }
    }

    #[test]
    fn staircase_product_formula(e1 in 1u32..5, e2 in 1u32..5) {
        let v = vars(&["x", "y"]);
        let gens = vec![
            parse_poly(&format!("x^{}", e1), &v).unwrap(),
            parse_poly(&format!("y^{}", e2), &v).unwrap(),
        ];
        let b = standard_basis(&gens, MonomialOrder::local(2)).unwrap();
        prop_assert_eq!(b.standard_monomials().unwrap().len() as u32, e1 * e2);
    }

    #[test]
    fn mult_matrices_commute_and_compose(idx in 0usize..6,
                                         p in arb_poly(2, 3, 3),
                                         q in arb_poly(2, 3, 3)) {
        let a = &algebra_pool()[idx];
        let mp = a.mult_matrix(&p).unwrap();
        let mq = a.mult_matrix(&q).unwrap();
        let mpq = a.mult_matrix(&p.mul(&q)).unwrap();
        prop_assert_eq!(mp.mul(&mq), mq.mul(&mp));
        prop_assert_eq!(mp.mul(&mq), (*mpq).clone());
    }

    #[test]
    fn annihilator_is_an_ideal(idx in 0usize..6, h in arb_poly(2, 3, 3)) {
        let a = &algebra_pool()[idx];
        let ann = a.annihilator(&h).unwrap();
        for i in 0..2 {
            let m = a.mult_matrix(&Polynomial::var(i, 2)).unwrap();
            for col in ann.basis_columns() {
                let moved = m.mul_vec(&col);
                prop_assert!(ann.contains_vector(&moved));
            }
        }
    }

    #[test]
    fn inertia_is_congruence_invariant(entries in prop::collection::vec(-5i64..=5, 10),
                                       lower in prop::collection::vec(-2i64..=2, 6),
                                       upper in prop::collection::vec(-2i64..=2, 6)) {
        // random symmetric 4x4 from 10 entries
        let n = 4;
        let mut g = QMat::zeros(n, n);
        let mut it = entries.iter();
        for i in 0..n {
            for j in 0..=i {
                let v = rat(*it.next().unwrap());
                g[(i, j)] = v.clone();
                g[(j, i)] = v;
            }
        }
        // invertible congruence: unit lower triangle times unit upper triangle
        let mut l = QMat::identity(n);
        let mut u = QMat::identity(n);
        let mut li = lower.iter();
        let mut ui = upper.iter();
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = rat(*li.next().unwrap());
                u[(j, i)] = rat(*ui.next().unwrap());
            }
        }
        let m = l.mul(&u);
        let congruent = m.transpose().mul(&g).mul(&m);
        prop_assert_eq!(inertia(&congruent), inertia(&g));
    }
}

/// Division-by-f forms are insensitive to the choice of preimage: the
/// ambiguity lies in the annihilator of f^(m-1), which pairs to zero with
/// elements of (f^(m-1)).
#[test]
fn flag_form_well_definedness() {
    use phindex_core::forms::{choose_functional, divide_in_algebra};
    use phindex_core::indices::flag_of;
    use rand::{Rng, SeedableRng};

    let v = vars(&["x", "y"]);
    // a non-quasihomogeneous singularity: its flag has depth 2
    let f = parse_poly("x^5 + x^2*y^2 + y^5", &v).unwrap();
    let a = QuotientAlgebra::build(&gradient(&f)).unwrap();
    let fl = flag_of(&a, &f).unwrap();
    assert!(fl.depth >= 2, "fixture must have a deep flag");
    let l = choose_functional(&a, &hessian_det(&f)).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);

    for m in 2..=fl.depth {
        let km = &fl.subspaces[m];
        let cols = km.basis_columns();
        let mf = a.mult_matrix(&f).unwrap().pow(m as u32 - 1);
        let kernel = mf.kernel();
        for _ in 0..220 {
            let combine = |basis: &Vec<Vec<Rat>>, rng: &mut rand_chacha::ChaCha8Rng| {
                let mut acc = vec![Rat::zero(); a.dim()];
                for b in basis {
                    let c = rat(rng.gen_range(-3i64..=3));
                    for (x, y) in acc.iter_mut().zip(b) {
                        *x += y * &c;
                    }
                }
                acc
            };
            let target = AlgebraElement {
                coords: combine(&cols, &mut rng),
            };
            let aprime = AlgebraElement {
                coords: combine(&cols, &mut rng),
            };
            let u = divide_in_algebra(&a, &target, &f, m as u32 - 1).unwrap();
            // perturb the solution inside the kernel of f^(m-1)
            let mut u2 = u.clone();
            if !kernel.is_empty() {
                let w = combine(&kernel, &mut rng);
                for (x, y) in u2.coords.iter_mut().zip(&w) {
                    *x += y;
                }
            }
            let pair = |uu: &AlgebraElement| {
                let prod = a.lift(uu).mul(&a.lift(&aprime));
                l.apply(&a.project(&prod).unwrap())
            };
            assert_eq!(pair(&u), pair(&u2));
        }
    }
}

/// Degree parity under negation: deg(-X) = (-1)^n deg(X).
#[test]
fn degree_negation_parity() {
    let cases: Vec<(Vec<&str>, Vec<&str>)> = vec![
        (vec!["x"], vec!["x"]),
        (vec!["x^2"], vec!["x"]),
        (vec!["x", "y"], vec!["x", "y"]),
        (vec!["x", "-y"], vec!["x", "y"]),
        (vec!["x^2-y^2", "2*x*y"], vec!["x", "y"]),
        (vec!["x", "y", "z"], vec!["x", "y", "z"]),
        (vec!["2*x", "2*y", "-2*z"], vec!["x", "y", "z"]),
    ];
    let cfg = OracleConfig::default();
    for (comps, names) in cases {
        let v = vars(&names);
        let x = VectorField::new(comps.iter().map(|t| parse_poly(t, &v).unwrap()).collect());
        let d = local_degree(&x, &cfg).unwrap();
        let dn = local_degree(&x.neg(), &cfg).unwrap();
        assert!(d.certified && dn.certified);
        let sign = if names.len() % 2 == 0 { 1 } else { -1 };
        assert_eq!(dn.value, sign * d.value, "field {:?}", comps);
    }
}

/// When the complex zero set is just the origin, the local and global
/// staircase counts agree.
#[test]
fn local_global_dimension_agreement() {
    let v = vars(&["x", "y"]);
    let fixtures: Vec<Vec<Polynomial>> = vec![
        polys(&["x", "y"], &v),
        polys(&["x^2", "y^3"], &v),
        gradient(&parse_poly("x^3 - y^2", &v).unwrap()),
        gradient(&parse_poly("x^3 + y^3", &v).unwrap()),
        polys(&["x^2 - y^2", "2*x*y"], &v),
        polys(&["x^3", "y^2"], &v),
    ];
    for gens in fixtures {
        let local = standard_basis(&gens, MonomialOrder::local(2)).unwrap();
        let global = standard_basis(&gens, MonomialOrder::global(2)).unwrap();
        assert_eq!(
            local.standard_monomials().unwrap().len(),
            global.standard_monomials().unwrap().len()
        );
    }
}

/// The ideal (f) is contained in Ann_B(h) for tangent pairs, and gradient
/// socles are generated by the Hessian class.
#[test]
fn tangency_and_socle_structure() {
    let v = vars(&["x", "y"]);
    let pairs = [
        ("x^2+y^2", ["x", "y"]),
        ("x^2-y^2", ["x", "y"]),
        ("x^3-y^2", ["2*x", "3*y"]),
    ];
    for (ft, comps) in pairs {
        let f = parse_poly(ft, &v).unwrap();
        let x = VectorField::new(comps.iter().map(|t| parse_poly(t, &v).unwrap()).collect());
        let h = cofactor(&x, &f).unwrap();
        let b = QuotientAlgebra::build(&x.components).unwrap();
        let f_ideal = b.ideal_image(&f, 1).unwrap();
        let ann = b.annihilator(&h).unwrap();
        assert!(ann.contains(&f_ideal), "(f) not inside Ann_B(h) for {}", ft);
    }

    for ft in ["x^2+y^2", "x^3-y^2", "x^3+y^3", "x^2+y^4"] {
        let f = parse_poly(ft, &v).unwrap();
        let a = QuotientAlgebra::build(&gradient(&f)).unwrap();
        let socle = a.socle().unwrap();
        assert_eq!(socle.dim(), 1, "gradient socle must be a line for {}", ft);
        let hess = a.project(&hessian_det(&f)).unwrap();
        assert!(!hess.is_zero());
        assert!(
            socle.contains_vector(&hess.coords),
            "Hessian spans the socle for {}",
            ft
        );
    }
}

/// Conservation of the total multiplicity along the canonical odd family:
/// the affine quotient of (f - t, f_1, ..., f_n) has constant dimension in
/// t near 0, and dim B_t / Ann(h) is constant among the t != 0 members
/// (at t = 0 the h-weighted form degenerates on Ann(h), which is exactly
/// what the flag machinery compensates).
#[test]
fn odd_family_dimension_conservation() {
    use phindex_core::indices::canonical_odd_field;
    use phindex_core::sbasis::MonomialOrder;

    let v = vars(&["x", "y", "z"]);
    for ft in ["x^2+y^2-z^2", "x^2+y^2+z^2", "x^4+y^2+z^2"] {
        let f = parse_poly(ft, &v).unwrap();
        let h = gradient(&f)[0].clone();
        let mut dims = Vec::new();
        let mut ranks = Vec::new();
        for t in [
            rat(0),
            Rat::new(1.into(), 16.into()),
            Rat::new((-1).into(), 16.into()),
        ] {
            let x = canonical_odd_field(&f, &t).unwrap();
            let b =
                QuotientAlgebra::build_with_order(&x.components, MonomialOrder::global(3)).unwrap();
            dims.push(b.dim());
            // dim B_t / Ann(h) = rank of multiplication by h
            ranks.push(b.dim() - b.annihilator(&h).unwrap().dim());
        }
        assert_eq!(
            dims[0], dims[1],
            "total multiplicity must be flat for {}",
            ft
        );
        assert_eq!(dims[1], dims[2]);
        assert_eq!(
            ranks[1], ranks[2],
            "nondegenerate part flat for t != 0, {}",
            ft
        );
        assert!(
            ranks[0] <= ranks[1],
            "the form may only degenerate at t = 0"
        );
    }
}

/// The odd-parity side relation gsv_minus = 2 - gsv_plus holds for the
/// outward-type fixtures but is not universal: the saddle-like canonical
/// odd field of the cone violates it. Both facts are pinned here.
#[test]
fn odd_side_relation_is_not_universal() {
    use phindex_core::indices::{gsv_real, Variant};

    let v3 = vars(&["x", "y", "z"]);
    let v1 = vars(&["x"]);

    // outward-type fixtures satisfy the relation
    let cone = parse_poly("x^2+y^2-z^2", &v3).unwrap();
    let radial = VectorField::new(polys(&["x", "y", "z"], &v3));
    let (p, m) = gsv_real(&cone, &radial, Variant::Reduced).unwrap();
    assert_eq!(m, 2 - p);

    let f1 = parse_poly("x^2", &v1).unwrap();
    let xfield = VectorField::new(polys(&["x"], &v1));
    let (p, m) = gsv_real(&f1, &xfield, Variant::Reduced).unwrap();
    assert_eq!(m, 2 - p);

    // the canonical odd field of the cone has two saddle-like zeros on the
    // one-sheet side: (-2, 0), and -2 + 0 != 2
    let odd = VectorField::new(polys(&["x^2+y^2-z^2", "-2*z", "-2*y"], &v3));
    let (p, m) = gsv_real(&cone, &odd, Variant::Reduced).unwrap();
    assert_eq!((p, m), (-2, 0));
    assert_ne!(m, 2 - p);
}

/// For a quasihomogeneous f in three variables the weighted Euler field is
/// tangent and outward along the fibers, so its GSV pair must equal the
/// Euler characteristics of the two smoothings. This exercises the whole
/// odd-parity assembly (relative signature, flag, sigma, K terms) on
/// algebras of dimension > 1.
#[test]
fn euler_field_gsv_matches_chi_in_three_variables() {
    use phindex_core::indices::{euler_characteristics, gsv_real, Variant};

    let v = vars(&["x", "y", "z"]);
    // (f, weighted Euler field)
    let fixtures: Vec<(&str, [&str; 3])> = vec![
        ("x^2+y^2-z^2", ["x", "y", "z"]),
        ("x^2+y^2+z^2", ["x", "y", "z"]),
        ("x^2-y^2-z^2", ["x", "y", "z"]),
        ("x^3+y^2+z^2", ["2*x", "3*y", "3*z"]),
        ("x^3-y^2+z^2", ["2*x", "3*y", "3*z"]),
        ("x^2+y^2+z^4", ["2*x", "2*y", "z"]),
        ("x^2+y^2-z^4", ["2*x", "2*y", "z"]),
        ("x^4+y^2+z^2", ["x", "2*y", "2*z"]),
        ("x^3+y^3+z^3", ["x", "y", "z"]),
        ("x^2-y^2+z^3", ["3*x", "3*y", "2*z"]),
    ];
    for (ft, comps) in fixtures {
        let f = parse_poly(ft, &v).unwrap();
        let e = VectorField::new(comps.iter().map(|t| parse_poly(t, &v).unwrap()).collect());
        // sanity: the field is genuinely tangent with the weighted-degree cofactor
        let h = cofactor(&e, &f).unwrap();
        assert!(!h.is_zero());
        let gsv = gsv_real(&f, &e, Variant::Reduced).unwrap();
        let chi = euler_characteristics(&f).unwrap();
        assert_eq!(gsv, chi, "f = {}", ft);
    }
}

/// Even-parity cross-validation on tangent pairs with non-unit cofactors:
/// fields of the form X_f + f*(constant field) stay tangent, move off the
/// Hamiltonian stratum, and must agree with the fiber-smoothing oracle on
/// both sides.
#[test]
fn perturbed_tangent_pairs_match_curve_oracle() {
    use phindex_core::indices::{canonical_hamiltonian, gsv_real, Variant};
    use phindex_core::oracle::curve_gsv;

    let v = vars(&["x", "y"]);
    let eps = phindex_core::expr::rat_frac(1, 8);
    let radius = rat(1);
    let perturbations: [(i64, i64); 3] = [(1, 0), (0, 1), (1, -1)];
    let mut checked = 0;
    for ft in ["x^2-y^2", "x^2+y^2", "x^3-y^2", "x^4-y^2"] {
        let f = parse_poly(ft, &v).unwrap();
        let ham = canonical_hamiltonian(&f).unwrap();
        for (a, b) in perturbations {
            let extra = VectorField::new(vec![f.scale(&rat(a)), f.scale(&rat(b))]);
            let x = ham.add(&extra);
            let h = cofactor(&x, &f).unwrap();
            // some perturbations land on fields with non-isolated complex
            // zeros; those are outside the formula's hypotheses
            let Ok(pair) = gsv_real(&f, &x, Variant::Reduced) else {
                continue;
            };
            let plus = curve_gsv(&f, &x, 1, &radius, &eps).unwrap();
            let minus = curve_gsv(&f, &x, -1, &radius, &(-eps.clone())).unwrap();
            assert!(plus.certified && minus.certified);
            assert_eq!(
                pair,
                (plus.value, minus.value),
                "f = {}, perturbation ({}, {}), cofactor {}",
                ft,
                a,
                b,
                h
            );
            checked += 1;
        }
    }
    assert!(checked >= 8, "only {} pairs were checkable", checked);
}

/// Regression against a hand-computed local intersection number: the curves
/// x^2 = y^3 and x^3 = y^4 meet the parametrization (t^3, t^2) in
/// x^3 - y^4 = t^8 (t - 1), so the multiplicity at the origin is 8 (the
/// ninth intersection point sits at (1, 1)).
#[test]
fn local_intersection_multiplicity_regression() {
    let v = vars(&["x", "y"]);
    let gens = polys(&["x^2 - y^3", "x^3 - y^4"], &v);
    let b = QuotientAlgebra::build(&gens).unwrap();
    assert_eq!(b.dim(), 8);

    // the same pair as a vector field: its local index matches the degree
    // oracle, which must shrink its box to exclude the far zero at (1, 1)
    let x = VectorField::new(gens);
    let algebraic = phindex_core::indices::elk_index(&x).unwrap();
    let verdict = local_degree(&x, &OracleConfig::default()).unwrap();
    assert!(verdict.certified);
    assert_eq!(verdict.value, algebraic);
}

/// Coefficient swell stress: a deformed T-singularity with ugly rational
/// coefficients keeps the same Newton diagram, hence the same Milnor number.
#[test]
fn rational_coefficient_swell() {
    let v = vars(&["x", "y"]);
    let f = parse_poly("1/3*x^5 + 1/7*x^2*y^2 + 1/11*y^5", &v).unwrap();
    let a = QuotientAlgebra::build(&gradient(&f)).unwrap();
    assert_eq!(a.dim(), 11);
    let fl = phindex_core::indices::flag_of(&a, &f).unwrap();
    assert_eq!(fl.depth, 2);
    let sig = phindex_core::indices::sigma(&f).unwrap();
    assert_eq!(sig.sigmas.len(), 3);
}

/// The annihilator correspondence on a large non-quasihomogeneous example
/// (tracked Mora division through an 11-dimensional Milnor algebra).
#[test]
fn correspondence_on_a_deep_singularity() {
    use phindex_core::algebra::annihilator_correspondence;
    let v = vars(&["x", "y", "z"]);
    let f = parse_poly("x^5 + x^2*y^2 + y^5 + z^2", &v).unwrap();
    let corr = annihilator_correspondence(&f).unwrap();
    assert_eq!(corr.ann_b_h.dim(), corr.ann_a_f.dim());
    assert!(corr.ann_b_h.dim() >= 1);
}

/// Report invariant: serialization round-trips through JSON.
#[test]
fn report_round_trip_on_corpus() {
    use phindex_core::report::{run_gsv, IndexReport, ProblemFile};
    let p = ProblemFile::parse_str(
        "variables: x, y\nf: x^3 - y^2\nX: 2*x, 3*y\nepsilon: 1/8\noracle: on\nshow-gram: on\n",
    )
    .unwrap();
    let r = run_gsv(&p).unwrap();
    let back = IndexReport::from_json(&r.to_json()).unwrap();
    assert_eq!(r, back);
}
