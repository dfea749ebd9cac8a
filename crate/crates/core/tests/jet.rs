use jetgauge_core::jet::{augmented_total_derivative, total_derivative, total_derivative_multi};
use jetgauge_core::random::Sampler;
use jetgauge_core::*;
use proptest::prelude::*;

fn one_var() -> JetContext {
    JetContext::new(&["x"], &["u", "v", "w"], &["a1"], 3).unwrap()
}

fn two_var() -> JetContext {
    JetContext::new(&["x", "y"], &["u", "w"], &[], 3).unwrap()
}

#[test]
fn single_total_derivatives() {
    let c = one_var();
    assert_eq!(total_derivative(&c, 0, &c.u(0)).unwrap(), c.parse("u_x").unwrap());
    assert!(total_derivative(&c, 0, &c.parse("sin(a1)").unwrap()).unwrap().is_zero());
    let e = c.parse("2*u + u*v").unwrap();
    assert_eq!(total_derivative(&c, 0, &e).unwrap(), c.parse("2*u_x + u_x*v + u*v_x").unwrap());
    assert_eq!(total_derivative(&c, 0, &c.parse("x^2*u").unwrap()).unwrap(), c.parse("2*x*u + x^2*u_x").unwrap());
}

#[test]
fn multi_index_derivatives() {
    let c = one_var();
    assert_eq!(total_derivative_multi(&c, &MultiIndex::from_counts(vec![2]), &c.u(0)).unwrap(), c.parse("u_xx").unwrap());
    let e = c.parse("u*v").unwrap();
    assert_eq!(total_derivative_multi(&c, &MultiIndex::zero(1), &e).unwrap(), e);

    let c2 = two_var();
    let got = total_derivative_multi(&c2, &MultiIndex::from_counts(vec![1, 1]), &c2.parse("u*w").unwrap()).unwrap();
    assert_eq!(got, c2.parse("u_xy*w + u_x*w_y + u_y*w_x + u*w_xy").unwrap());
}

#[test]
fn overflow_names_the_symbol() {
    let c = one_var();
    match total_derivative(&c, 0, &c.parse("u_xxx").unwrap()) {
        Err(Error::OrderOverflow { symbol, var, max }) => {
            assert_eq!((symbol.as_str(), var.as_str(), max), ("u_xxx", "x", 3));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn augmented_derivatives() {
    let c = JetContext::augmented(&["x"], &["u", "v"], &["a1"], 2).unwrap();
    assert_eq!(augmented_total_derivative(&c, 0, &c.alpha(0)).unwrap(), c.parse("a1_x").unwrap());
    let e = c.parse("u*a1").unwrap();
    assert_eq!(augmented_total_derivative(&c, 0, &e).unwrap(), c.parse("u_x*a1 + u*a1_x").unwrap());
    assert_eq!(augmented_total_derivative(&c, 0, &c.u(1)).unwrap(), c.parse("v_x").unwrap());
    assert!(total_derivative(&c, 0, &c.alpha(0)).unwrap().is_zero());
    assert!(matches!(one_var().parse("a1_x"), Err(Error::InvalidName { .. })));
}

#[test]
fn contexts_reject_bad_names() {
    assert!(JetContext::new(&["x"], &["u", "u"], &[], 1).is_err());
    assert!(JetContext::new(&["x"], &["sin"], &[], 1).is_err());
    assert!(JetContext::new(&["x"], &["u_1"], &[], 1).is_err());
    assert!(JetContext::new(&[], &["u"], &[], 1).is_err());
    assert!(matches!(two_var().parse("u_yx"), Err(Error::InvalidName { .. })));
}

#[test]
fn multi_indices() {
    let j = MultiIndex::from_counts(vec![1, 2]);
    assert_eq!(j.order(), 3);
    assert_eq!(j.append(0).counts(), &[2, 2]);
    assert_eq!(j.remove(0).unwrap().counts(), &[0, 2]);
    assert!(MultiIndex::zero(2).remove(1).is_none());
    assert_eq!(MultiIndex::of_order(2, 2).len(), 3);
    assert_eq!(MultiIndex::up_to(3, 2).len(), 10);
}

fn vars(c: &JetContext) -> Vec<Expr> {
    ["x", "y", "u", "w", "u_x", "w_y", "u_xy"].iter().map(|s| c.parse(s).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn total_derivatives_commute(seed in any::<u64>()) {
        let c = two_var();
        let e = Sampler::new(seed).smooth(&vars(&c)[..6], 3);
        let xy = total_derivative(&c, 1, &total_derivative(&c, 0, &e).unwrap()).unwrap();
        let yx = total_derivative(&c, 0, &total_derivative(&c, 1, &e).unwrap()).unwrap();
        prop_assert!(Oracle::default().equal(&xy, &yx).holds());
    }

    #[test]
    fn total_derivative_obeys_leibniz(seed in any::<u64>()) {
        let c = two_var();
        let mut s = Sampler::new(seed);
        let (a, b) = (s.smooth(&vars(&c), 2), s.smooth(&vars(&c), 2));
        for i in 0..2 {
            let lhs = total_derivative(&c, i, &(&a * &b)).unwrap();
            let rhs = total_derivative(&c, i, &a).unwrap() * &b + &a * total_derivative(&c, i, &b).unwrap();
            prop_assert!(Oracle::default().equal(&lhs, &rhs).holds());
        }
    }

    #[test]
    fn augmented_derivative_obeys_leibniz_and_agrees_off_gauge(seed in any::<u64>()) {
        let c = JetContext::augmented(&["x"], &["u", "v"], &["a1"], 2).unwrap();
        let vs: Vec<Expr> = ["x", "u", "v", "a1", "u_x", "a1_x"].iter().map(|n| c.parse(n).unwrap()).collect();
        let mut s = Sampler::new(seed);
        let (a, b) = (s.smooth(&vs, 2), s.smooth(&vs, 2));
        let lhs = augmented_total_derivative(&c, 0, &(&a * &b)).unwrap();
        let rhs = augmented_total_derivative(&c, 0, &a).unwrap() * &b + &a * augmented_total_derivative(&c, 0, &b).unwrap();
        prop_assert!(Oracle::default().equal(&lhs, &rhs).holds());
        let free = s.smooth(&[vs[0].clone(), vs[1].clone(), vs[2].clone(), vs[4].clone()], 2);
        prop_assert_eq!(augmented_total_derivative(&c, 0, &free).unwrap(), total_derivative(&c, 0, &free).unwrap());
    }
}
