use std::sync::Arc;

use hallbasis::oracle::Evaluator;
use hallbasis::{Decomposer, HallOrder, HallSet, LieSeries, Magma, OrderSpec, TreeId};
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Tree {
    Leaf(usize),
    Node(Box<Tree>, Box<Tree>),
}

fn tree(k: usize) -> impl Strategy<Value = Tree> {
    let leaf = (0..k).prop_map(Tree::Leaf);
    leaf.prop_recursive(4, 12, 2, |inner| {
        (inner.clone(), inner).prop_map(|(l, r)| Tree::Node(Box::new(l), Box::new(r)))
    })
}

fn build(m: &Magma, t: &Tree) -> TreeId {
    match t {
        Tree::Leaf(i) => m.letter(*i).unwrap(),
        Tree::Node(l, r) => m.node(build(m, l), build(m, r)).unwrap(),
    }
}

fn decomposer(spec: OrderSpec, max_len: usize) -> Decomposer {
    let o = HallOrder::standalone(spec).unwrap();
    Decomposer::new(Arc::new(HallSet::generate(o, max_len).unwrap()))
}

fn order_spec() -> impl Strategy<Value = OrderSpec> {
    prop_oneof![
        Just(OrderSpec::LengthLex { k: 2 }),
        Just(OrderSpec::Lyndon { k: 2 }),
        Just(OrderSpec::FiboMin),
        Just(OrderSpec::SuperGeom),
        Just(OrderSpec::Lyndon { k: 3 }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interning_is_canonical(t in tree(3)) {
        let m = Magma::new(3).unwrap();
        let x = build(&m, &t);
        prop_assert_eq!(build(&m, &t), x);
        prop_assert_eq!(m.parse(&m.format(x)).unwrap(), x);
        let other = Magma::new(3).unwrap();
        prop_assert_eq!(other.format(build(&other, &t)), m.format(x));
    }

    #[test]
    fn expansion_matches_oracle(spec in order_spec(), t in tree(2)) {
        let dec = decomposer(spec, 10);
        let m = dec.magma().clone();
        let k = spec.alphabet_size();
        let relabel = |i: usize| i % k;
        fn map(t: &Tree, f: &dyn Fn(usize) -> usize) -> Tree {
            match t {
                Tree::Leaf(i) => Tree::Leaf(f(*i)),
                Tree::Node(l, r) => Tree::Node(Box::new(map(l, f)), Box::new(map(r, f))),
            }
        }
        let x = build(&m, &map(&t, &relabel));
        prop_assume!(m.len(x) <= 10);
        let s = dec.expand_tree(x).unwrap();
        let ev = Evaluator::new(m.clone());
        prop_assert_eq!(ev.eval_series(&s), (*ev.eval_tree(x)).clone());
    }

    #[test]
    fn antisymmetry(spec in order_spec(), i in 0usize..1000, j in 0usize..1000) {
        let dec = decomposer(spec, 8);
        let elems: Vec<TreeId> = dec.hall_set().elements().filter(|&t| dec.magma().len(t) <= 4).collect();
        let (a, b) = (elems[i % elems.len()], elems[j % elems.len()]);
        let ab = dec.decompose(a, b).unwrap();
        let ba = dec.decompose(b, a).unwrap();
        prop_assert_eq!(ab.negated(), (*ba).clone());
        if a == b {
            prop_assert!(ab.is_zero());
        }
    }

    #[test]
    fn jacobi(spec in order_spec(), i in 0usize..1000, j in 0usize..1000, l in 0usize..1000) {
        let dec = decomposer(spec, 9);
        let elems: Vec<TreeId> = dec.hall_set().elements().filter(|&t| dec.magma().len(t) <= 3).collect();
        let pick = |n: usize| LieSeries::single(elems[n % elems.len()]);
        let (a, b, c) = (pick(i), pick(j), pick(l));
        let cyc = |x: &LieSeries, y: &LieSeries, z: &LieSeries| {
            dec.bracket_series(&dec.bracket_series(x, y).unwrap(), z).unwrap()
        };
        let sum = dec.add_series(&cyc(&a, &b, &c), &cyc(&b, &c, &a)).unwrap();
        let sum = dec.add_series(&sum, &cyc(&c, &a, &b)).unwrap();
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn norm_bounded_by_theta_factorial(spec in order_spec(), i in 0usize..1000, j in 0usize..1000) {
        let dec = decomposer(spec, 9);
        let elems: Vec<TreeId> = dec.hall_set().elements().filter(|&t| dec.magma().len(t) <= 4).collect();
        let (mut a, mut b) = (elems[i % elems.len()], elems[j % elems.len()]);
        prop_assume!(a != b);
        if !dec.order().less(a, b).unwrap() {
            std::mem::swap(&mut a, &mut b);
        }
        let theta = dec.theta(a, b).unwrap();
        let norm = dec.decompose(a, b).unwrap().norm();
        prop_assert!(norm <= hallbasis::bounds::bound_general_theta(theta));
    }
}
