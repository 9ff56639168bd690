use std::sync::OnceLock;

use mertens_core::constants::ConstantsTable;
use mertens_core::expansion::{
    generate_r4, generate_sk, generate_sk_with, growth_diagnostics, leading_term_check, pq_a_expansion,
    r2_expansion, r3_expansion, r4_expansion, r_coeff, s2_expansion, s3_expansion, t_coeff, v_coeff, Expansion,
};
use mertens_core::zetaprime::zeta_int;
use mertens_core::HPReal;

const P: u32 = 192;

fn consts() -> &'static ConstantsTable {
    static T: OnceLock<ConstantsTable> = OnceLock::new();
    T.get_or_init(|| ConstantsTable::build(40, 4, P).unwrap())
}

fn tol() -> HPReal {
    HPReal::pow2(-168, P)
}

fn assert_close(a: &HPReal, b: &HPReal, what: &str) {
    let d = (a - b).abs();
    assert!(d <= tol(), "{what}: {a} vs {b} (diff {})", d.fmt_sci(3));
}

fn assert_same(a: &Expansion, b: &Expansion, what: &str) {
    let d = a.max_abs_diff(b);
    assert!(d <= tol(), "{what}: max coefficient difference {}", d.fmt_sci(3));
}

#[test]
fn s2_generator_matches_closed_form() {
    let c = consts();
    for n in 0..=8 {
        assert_same(&generate_sk(2, n, c).unwrap(), &s2_expansion(n, c).unwrap(), &format!("S_2, N={n}"));
    }
}

#[test]
fn s3_generator_matches_closed_form() {
    let c = consts();
    assert!(v_coeff(1, c).unwrap().is_zero());
    let (a1, a2, a3) = (c.alpha(1).unwrap(), c.alpha(2).unwrap(), c.alpha(3).unwrap());
    assert_close(&v_coeff(2, c).unwrap(), &(a2.mul_i64(6) + a1.square().mul_i64(3)), "v_2");
    assert_close(&v_coeff(3, c).unwrap(), &(a3.mul_i64(9) + (a1 * a2).mul_i64(12)), "v_3");
    for n in [1, 4, 8] {
        assert_same(&generate_sk(3, n, c).unwrap(), &s3_expansion(n, c).unwrap(), &format!("S_3, N={n}"));
    }
}

#[test]
fn s4_low_order_terms() {
    let c = consts();
    let e = generate_sk(4, 2, c).unwrap();
    let z2 = zeta_int(2, P).unwrap();
    let (a1, a2) = (c.alpha(1).unwrap(), c.alpha(2).unwrap());
    // 1/log x: 12 alpha_1 (Y^2 - zeta(2))
    assert_close(&e.coeff(2, 1), &a1.mul_i64(12), "S_4 Y^2/log x");
    assert_close(&e.coeff(1, 1), &HPReal::zero(P), "S_4 Y/log x");
    assert_close(&e.coeff(0, 1), &-(a1 * &z2).mul_i64(12), "S_4 1/log x");
    // 1/log^2 x: 12 alpha_2 (Y^2 - zeta(2)) - 12 (alpha_1^2 + 2 alpha_2) Y + 12 alpha_1^2
    assert_close(&e.coeff(2, 2), &a2.mul_i64(12), "S_4 Y^2/log^2 x");
    assert_close(&e.coeff(1, 2), &-(a1.square() + a2.mul_i64(2)).mul_i64(12), "S_4 Y/log^2 x");
    assert_close(&e.coeff(0, 2), &(a1.square().mul_i64(12) - (a2 * &z2).mul_i64(12)), "S_4 1/log^2 x");
    assert_eq!(e.max_llx_pow(0), Some(4));
}

#[test]
fn s5_first_order_term() {
    let c = consts();
    let e = generate_sk(5, 1, c).unwrap();
    let (z2, z3) = (zeta_int(2, P).unwrap(), zeta_int(3, P).unwrap());
    let a1 = c.alpha(1).unwrap();
    // 20 alpha_1 (Y^3 - 3 zeta(2) Y + 2 zeta(3))
    assert_close(&e.coeff(3, 1), &a1.mul_i64(20), "Y^3");
    assert_close(&e.coeff(2, 1), &HPReal::zero(P), "Y^2");
    assert_close(&e.coeff(1, 1), &-(a1 * &z2).mul_i64(60), "Y");
    assert_close(&e.coeff(0, 1), &(a1 * &z3).mul_i64(40), "1");
}

#[test]
fn leading_and_next_terms() {
    let c = consts();
    for k in 2..=5 {
        for m in 1..=5 {
            let chk = leading_term_check(k, m, c).unwrap();
            assert_close(&chk.leading.0, &chk.leading.1, &format!("leading k={k} M={m}"));
            match chk.next {
                Some((got, want)) => assert_close(&got, &want, &format!("next k={k} M={m}")),
                None => assert_eq!(k, 2),
            }
        }
    }
}

#[test]
fn vanishing_compositions_can_be_skipped() {
    let c = consts();
    for k in 2..=5 {
        let a = generate_sk_with(k, 4, c, true).unwrap();
        let b = generate_sk_with(k, 4, c, false).unwrap();
        assert_same(&a, &b, &format!("k={k}"));
    }
}

#[test]
fn recentering_is_an_involution() {
    let c = consts();
    let e = generate_sk(4, 3, c).unwrap();
    assert!(e.centered_on_beta);
    assert_same(&e, &e.uncentered().recentered(), "S_4 round trip");
}

#[test]
fn r_coefficients() {
    let c = consts();
    assert_close(&r_coeff(1, c).unwrap(), &c.alpha_ja(1, 2).unwrap(), "r_1");
    let (a1, a2, a3) = (c.alpha(1).unwrap(), c.alpha(2).unwrap(), c.alpha(3).unwrap());
    let r2 = c.alpha_ja(2, 2).unwrap() + a2 + a1.square().div_i64(2);
    assert_close(&r_coeff(2, c).unwrap(), &r2, "r_2");
    let r3 = c.alpha_ja(3, 2).unwrap().mul_i64(4).div_i64(3) + a3.mul_i64(3).div_i64(2) + (a1 * a2).mul_i64(2);
    assert_close(&r_coeff(3, c).unwrap(), &r3, "r_3");
}

#[test]
fn r2_and_r3_assemble_from_s_expansions() {
    let c = consts();
    let p2 = c.pzeta(2).unwrap();
    let mut r2 = Expansion::new(2, 6, true, c.beta.clone());
    r2.add_scaled(&s2_expansion(6, c).unwrap(), &HPReal::from_ratio(1, 2, P)).unwrap();
    r2.add_term(0, 0, p2.div_i64(2));
    assert_same(&r2, &r2_expansion(6, c).unwrap(), "R_2");

    let mut r3 = Expansion::new(3, 6, true, c.beta.clone());
    r3.add_scaled(&generate_sk(3, 6, c).unwrap(), &HPReal::from_ratio(1, 6, P)).unwrap();
    r3.add_scaled(&pq_a_expansion(2, 6, c).unwrap(), &HPReal::from_ratio(1, 2, P)).unwrap();
    r3.add_term(0, 0, c.pzeta(3).unwrap().div_i64(3));
    assert_same(&r3, &r3_expansion(6, c).unwrap(), "R_3");
}

#[test]
fn r4_generator_reproduces_closed_forms() {
    let c = consts();
    let g = generate_r4(3, c).unwrap();
    let closed = r4_expansion(3, c).unwrap();
    assert_same(&g, &closed, "R_4 through N=3");
    let z2 = zeta_int(2, P).unwrap();
    let p2 = c.pzeta(2).unwrap();
    for j in 1..=2usize {
        let aj = c.alpha(j).unwrap();
        let t = (aj * (p2 - &z2)).div_i64(2) - g.coeff(0, j as u32);
        assert_close(&t, &t_coeff(j, c).unwrap(), &format!("t_{j}"));
        assert_close(&g.coeff(2, j as u32), &aj.div_i64(2), "alpha_j/2");
        assert_close(&g.coeff(1, j as u32), &-r_coeff(j, c).unwrap(), "-r_j");
        assert_close(&g.coeff(3, j as u32), &HPReal::zero(P), "no Y^3 term");
    }
    assert_close(&t_coeff(1, c).unwrap(), &c.alpha_ja(1, 3).unwrap(), "t_1 = alpha_{1,3}");
    assert!(t_coeff(3, c).is_err());
}

#[test]
fn t3_is_stable_under_precision_doubling() {
    let lo = consts();
    let hi = ConstantsTable::build(4, 4, 2 * P).unwrap();
    let t3 = |c: &ConstantsTable| {
        let g = generate_r4(3, c).unwrap();
        let a3 = c.alpha(3).unwrap();
        let z2 = zeta_int(2, c.prec).unwrap();
        (a3 * (c.pzeta(2).unwrap() - z2)).div_i64(2) - g.coeff(0, 3)
    };
    let a = t3(lo);
    let b = t3(&hi);
    assert_close(&a, &b.with_prec(P), "t_3");
}

#[test]
fn growth_ratios_are_bounded() {
    let rep = growth_diagnostics(consts()).unwrap();
    assert!(rep.r_positive);
    assert!(rep.bounded, "{:?} {:?}", rep.r_ratio, rep.v_ratio);
    assert_eq!(rep.r_ratio.last().unwrap().0, 40);
}

#[test]
fn limits() {
    let c = consts();
    assert!(generate_sk(7, 2, c).is_err());
    assert!(generate_sk(3, 9, c).is_err());
    assert!(generate_r4(5, c).is_err());
    assert!(r4_expansion(4, c).is_err());
}
