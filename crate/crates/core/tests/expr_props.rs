use loja::expr::{parse, BinaryOp, Branch, CmpOp, Comparison, Expr, Guard, PiecewiseFn, UnaryOp};
use loja::Error;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-50.0f64..50.0).prop_map(Expr::Const),
        (0u32..6).prop_map(|v| Expr::Const(v as f64)),
        (1usize..=3).prop_map(Expr::Var),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 32, 3, |inner| {
        let unary = prop_oneof![
            Just(UnaryOp::Neg),
            Just(UnaryOp::Abs),
            Just(UnaryOp::Sqrt),
            Just(UnaryOp::Floor),
            Just(UnaryOp::Sign),
        ];
        let binary = prop_oneof![
            Just(BinaryOp::Add),
            Just(BinaryOp::Sub),
            Just(BinaryOp::Mul),
            Just(BinaryOp::Div),
        ];
        prop_oneof![
            (unary, inner.clone()).prop_map(|(op, e)| Expr::Unary(op, Box::new(e))),
            (binary, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::Binary(op, Box::new(l), Box::new(r))),
            (inner.clone(), 0u32..5).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
            prop::collection::vec(inner.clone(), 1..4).prop_map(Expr::Min),
            prop::collection::vec(inner, 1..4).prop_map(Expr::Max),
        ]
    })
}

fn cmp_op() -> impl Strategy<Value = CmpOp> {
    prop_oneof![Just(CmpOp::Lt), Just(CmpOp::Le), Just(CmpOp::Eq), Just(CmpOp::Ge), Just(CmpOp::Gt)]
}

fn guard() -> impl Strategy<Value = Guard> {
    let cmp = (expr(), cmp_op(), expr()).prop_map(|(lhs, op, rhs)| Comparison { lhs, op, rhs });
    prop::collection::vec(prop::collection::vec(cmp, 1..3), 1..3).prop_map(|disjuncts| Guard { disjuncts })
}

fn piecewise() -> impl Strategy<Value = PiecewiseFn> {
    prop::collection::vec((guard(), expr()), 1..4).prop_map(|bs| {
        let branches = bs
            .into_iter()
            .map(|(g, body)| Branch { guard: Some(g), body })
            .collect();
        PiecewiseFn::new(3, branches).unwrap()
    })
}

fn with_arity3(f: PiecewiseFn) -> PiecewiseFn {
    PiecewiseFn::new(3, f.branches().to_vec()).unwrap()
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(e in expr()) {
        let f = PiecewiseFn::from_expr(e, 3).unwrap();
        let again = with_arity3(parse(&f.to_string()).unwrap());
        prop_assert_eq!(&again, &f, "printed as {}", f);
    }

    #[test]
    fn piecewise_print_then_parse_is_identity(f in piecewise()) {
        let again = with_arity3(parse(&f.to_string()).unwrap());
        prop_assert_eq!(&again, &f);
    }

    #[test]
    fn eval_is_deterministic(e in expr(), x in prop::array::uniform3(-3.0f64..3.0)) {
        let f = PiecewiseFn::from_expr(e, 3).unwrap();
        let a = f.eval(&x);
        let b = f.eval(&x);
        match (a, b) {
            (Ok(u), Ok(v)) => prop_assert!(u.to_bits() == v.to_bits() || (u.is_nan() && v.is_nan())),
            (Err(u), Err(v)) => prop_assert_eq!(u, v),
            _ => prop_assert!(false, "outcome changed between calls"),
        }
    }

    #[test]
    fn floor_rounds_toward_negative_infinity(v in -100.0f64..100.0) {
        let f = parse("floor(x1)").unwrap();
        prop_assert_eq!(f.eval(&[v]).unwrap(), v.floor());
    }
}

#[test]
fn fixture_functions() {
    let frac = parse("x1 - floor(x1)").unwrap();
    assert_eq!(frac.eval(&[2.25]).unwrap(), 0.25);
    assert_eq!(frac.eval(&[-0.25]).unwrap(), 0.75);

    let g38 = parse("piecewise{ x1 < 1 : 1/(1-x1) ; x1 == 1 : 1 }").unwrap();
    assert_eq!(g38.eval(&[0.5]).unwrap(), 2.0);
    assert_eq!(g38.eval(&[1.0]).unwrap(), 1.0);
    assert!(matches!(g38.eval(&[2.0]), Err(Error::Domain { .. })));

    let g39 = parse("piecewise{ x1 > 0 : 0 ; x1 == 0 : 1 }").unwrap();
    assert_eq!(g39.eval(&[0.0]).unwrap(), 1.0);
    assert_eq!(g39.eval(&[0.3]).unwrap(), 0.0);

    let f49 = loja::fixtures::ex4_9(4).unwrap().f;
    assert_eq!(f49.eval(&[3.5]).unwrap(), 0.125);
}

#[test]
fn zero_takes_declared_arity() {
    let z = loja::expr::parse_with_arity("0", 2).unwrap();
    assert_eq!(z.arity(), 2);
    assert_eq!(z.eval(&[7.0, -1.0]).unwrap(), 0.0);
    assert!(z.eval(&[1.0]).is_err());
}

#[test]
fn evaluation_errors() {
    assert!(matches!(parse("sqrt(x1)").unwrap().eval(&[-1.0]), Err(Error::Eval { .. })));
    assert!(matches!(parse("1/x1").unwrap().eval(&[0.0]), Err(Error::Eval { .. })));
    assert!(matches!(loja::expr::parse_with_arity("x3", 2), Err(Error::Arity { .. })));
    match parse("x1 +\n  * 2") {
        Err(Error::Syntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn overlapping_guards_are_reported() {
    let f = parse("piecewise{ x1 <= 1 : 0 ; x1 >= 0 : 1 }").unwrap();
    let pts: Vec<Vec<f64>> = (0..=4).map(|i| vec![i as f64 * 0.5 - 0.5]).collect();
    let lint = f.lint_overlaps(&pts).unwrap();
    let hits: Vec<f64> = lint.iter().map(|o| o.point[0]).collect();
    assert_eq!(hits, vec![0.0, 0.5, 1.0]);
    assert_eq!(f.eval(&[0.5]).unwrap(), 0.0);
}
