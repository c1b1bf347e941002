use super::*;
use crate::field::{Fq, Rationals};
use crate::poly::parse_poly;

const EX1: &str = "(x^2-y^3)^4 - 2*(x^2-y^3)^2*x*y^11 - y^19*(1-y^3)*(x^2-y^3) + y^25";
const EX2: &str = "-x^2*y^4*(x^2-y^3)^2 + x^11 + y^14 + x*y^13";

fn tree_q(s: &str) -> NewtonTree {
    let k = Rationals;
    build_tree(&parse_poly(s, &k).unwrap(), &k).unwrap().tree
}

fn tree_p(s: &str, p: u64) -> NewtonTree {
    let k = Fq::prime(p).unwrap();
    build_tree(&parse_poly(s, &k).unwrap(), &k).unwrap().tree
}

fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v
}

#[test]
fn cusp() {
    let t = tree_q("x^2-y^3");
    assert_eq!(t.multiplicity(), -1);
    assert_eq!(sorted(t.vertex_report()), vec![2, 3, 6]);
    assert_eq!(t.r(), 1);
}

#[test]
fn first_example() {
    let t = tree_q(EX1);
    let mut levels: Vec<(u64, (u64, u64))> = t.vertices().map(|v| (v.n, v.decorations.unwrap())).collect();
    levels.sort();
    assert_eq!(levels, vec![(24, (2, 3)), (100, (25, 2)), (202, (101, 2))]);
    assert_eq!(t.multiplicity(), -155);
    assert_eq!(sorted(t.vertex_report()), vec![8, 12, 24, 50, 100, 101, 202]);
    assert!(t.check_rho_bar_sums());
    let arrow = t.branch_arrows().next().unwrap().id;
    let v1 = t.vertices().find(|v| v.n == 24).unwrap().id;
    assert_eq!(t.rho_bar(v1, arrow), Some(24));
    let v2 = t.vertices().find(|v| v.n == 100).unwrap().id;
    assert_eq!(t.rho_bar(v2, arrow), Some(100));
}

#[test]
fn first_example_over_small_prime() {
    let t = tree_p(EX1, 7);
    assert_eq!(t.multiplicity(), -155);
}

#[test]
fn second_example_by_characteristic() {
    for p in [3, 5, 7, 11, 13] {
        let t = tree_p(EX2, p);
        assert_eq!(t.multiplicity(), -101, "p = {p}");
        assert_eq!(t.r(), 5);
        assert!(t.vertex_report().contains(&11));
    }
    let t = tree_p(EX2, 2);
    assert_eq!(t.multiplicity(), -103);
    let mut levels: Vec<u64> = t.minimalize().vertices().map(|v| v.n).collect();
    levels.sort_unstable();
    assert_eq!(levels, vec![26, 30, 44, 58]);
    let v58 = t.vertices().find(|v| v.n == 58).unwrap();
    assert_eq!(v58.decorations, Some((15, 2)));
    let v30 = t.vertices().find(|v| v.n == 30).unwrap();
    assert_eq!(v30.decorations, Some((5, 2)));
}

#[test]
fn minimalization_preserves_invariants() {
    for s in [EX1, "x^2-y^3", "y-x^2", "x*y", "(x^2-y^3)*(x^3-y^2)"] {
        let t = tree_q(s);
        let m = t.minimalize();
        assert_eq!(t.raw_multiplicity(), m.raw_multiplicity(), "{s}");
        assert_eq!(t.r(), m.r());
        assert!((t.r() as i64 - t.multiplicity()) % 2 == 0);
        let ids: Vec<usize> = m.nodes.iter().map(|n| n.id).collect();
        for &a in &ids {
            for &b in &ids {
                if a != b {
                    assert_eq!(t.rho(a, b), m.rho(a, b));
                }
            }
        }
    }
}

#[test]
fn axes_and_smooth_curves() {
    let t = tree_q("x*y");
    assert_eq!(t.vertices().count(), 0);
    assert_eq!(t.r(), 2);
    assert_eq!(t.multiplicity(), 0);
    assert_eq!(tree_q("x").multiplicity(), 1);
    assert_eq!(tree_q("y-x^2").multiplicity(), 1);
    // δ(x(y²-x³)) = 0 + 1 + 2 = 3, r = 2
    assert_eq!(tree_q("x*y^2-x^4").multiplicity(), -4);
}

#[test]
fn rejects_bad_input() {
    let k = Rationals;
    let err = |s: &str| build_tree(&parse_poly(s, &k).unwrap(), &k).unwrap_err();
    assert_eq!(err("1+x"), TreeError::UnitInput);
    assert_eq!(err("x^2"), TreeError::NotReduced);
    assert_eq!(err("(x-y^2)^2"), TreeError::NotReduced);
}

#[test]
fn extension_roots() {
    // x² + y² has no root in F_3 but splits over F_9.
    let t = tree_p("x^2+y^2", 3);
    assert_eq!(t.r(), 2);
    // two transversal lines: δ = 1
    assert_eq!(t.multiplicity(), 0);
}

#[test]
fn json_round_trip() {
    let t = tree_q(EX1);
    let j = serde_json::to_string(&t.to_json()).unwrap();
    let back = NewtonTree::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(back.multiplicity(), t.multiplicity());
    assert_eq!(sorted(back.vertex_report()), sorted(t.vertex_report()));
    let xy = tree_q("x*y");
    let j = xy.to_json();
    assert_eq!(NewtonTree::from_json(&j).unwrap().r(), 2);
}

#[test]
fn renderings() {
    let t = tree_q("x^2-y^3");
    let dot = t.to_dot();
    assert!(dot.starts_with("graph") && dot.trim_end().ends_with('}'));
    let ascii = t.to_ascii();
    assert!(ascii.contains("(6)"));
}
