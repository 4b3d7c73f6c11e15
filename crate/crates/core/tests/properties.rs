use std::collections::HashMap;

use isolab::generators::{decompose_ak, GluedTrees, GluedTreesParams, VonKoch, VonKochParams};
use isolab::profiles::{check_pair, compare, Curve, Grid, Lookup, Relation};
use isolab::space::{
    distance, h_boundary, neighborhood, Budget, FiniteSpace, Lattice, Length, Space, SubsetRegion,
    VertexId,
};
use proptest::prelude::*;

const CAP: Length = Length::MAX / 4;

fn d<S: Space + ?Sized>(space: &S, x: VertexId, y: VertexId) -> Length {
    distance(space, x, y, CAP, Budget::default()).unwrap().unwrap()
}

fn point() -> impl Strategy<Value = VertexId> {
    (-12i64..=12, -12i64..=12).prop_map(|(a, b)| VertexId::point(&[a, b]))
}

fn glued() -> &'static GluedTrees {
    use std::sync::OnceLock;
    static G: OnceLock<GluedTrees> = OnceLock::new();
    G.get_or_init(|| GluedTrees::new(&GluedTreesParams { n_max: 3, scale: 1 }, Budget::default()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lattice_distance_is_a_metric(x in point(), y in point(), z in point()) {
        let s = Lattice::new(2, 3);
        prop_assert_eq!(d(&s, x, y), d(&s, y, x));
        prop_assert!(d(&s, x, z) <= d(&s, x, y) + d(&s, y, z));
        prop_assert_eq!(d(&s, x, y), 3 * x.l1(&y));
    }

    #[test]
    fn weighted_plane_distance_is_a_pseudometric(
        a in (0i64..=40, -8i64..=8), b in (0i64..=40, -8i64..=8), c in (0i64..=40, -8i64..=8),
    ) {
        let y = VonKoch::new(&VonKochParams { k_max: 2 }, Budget::default()).unwrap();
        let [x, u, v] = [a, b, c].map(|p| VertexId::point(&[p.0, p.1]));
        prop_assert_eq!(d(&y, x, u), d(&y, u, x));
        prop_assert!(d(&y, x, v) <= d(&y, x, u) + d(&y, u, v));
    }

    #[test]
    fn glued_tree_distance_is_a_pseudometric(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let g = glued();
        let vs = g.space().finite_vertices().unwrap();
        let [x, y, z] = [i, j, k].map(|ix| vs[ix.index(vs.len())]);
        let s = g.space();
        prop_assert_eq!(d(s, x, y), d(s, y, x));
        prop_assert!(d(s, x, z) <= d(s, x, y) + d(s, y, z));
        prop_assert_eq!(d(s, x, x), 0);
    }
}

/// Nondecreasing samples at `t = 1..=n`.
fn monotone(n: usize) -> impl Strategy<Value = Curve> {
    prop::collection::vec(0u32..6, n).prop_map(|steps| {
        let mut acc = 0.0;
        let pts = steps
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                acc += s as f64;
                ((i + 1) as f64, acc)
            })
            .collect();
        Curve::sampled("c", pts, Lookup::Floor)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn comparison_is_reflexive(f in monotone(24)) {
        let w = compare(&f, &f, Grid { max_exp: 3 }).unwrap();
        prop_assert_eq!(w.relation, Relation::Dominates);
        prop_assert_eq!(w.constants, vec![1, 1]);
    }

    #[test]
    fn comparison_is_transitive(f in monotone(24), g in monotone(24), h in monotone(24)) {
        let grid = Grid { max_exp: 4 };
        let fg = compare(&f, &g, grid).unwrap();
        let gh = compare(&g, &h, grid).unwrap();
        if fg.relation == Relation::Dominates && gh.relation == Relation::Dominates {
            let c1 = fg.constants[0] * gh.constants[0];
            let c2 = fg.constants[1] * gh.constants[1];
            prop_assert_eq!(check_pair(&f, &h, c1, c2).unwrap(), None);
        }
    }
}

/// Points of `A_k` with their depth, by walking its segments from the root.
fn walk_tree(k: u32) -> HashMap<(i64, i64), u64> {
    fn go(pos: (i64, i64), j: u32, k: u32, prev: Option<(i64, i64)>, depth: u64, out: &mut HashMap<(i64, i64), u64>) {
        out.insert(pos, depth);
        if j > k {
            return;
        }
        let len = 1i64 << (k - j);
        for e in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
            if prev == Some((-e.0, -e.1)) {
                continue;
            }
            for r in 1..len {
                let p = (pos.0 + r * e.0, pos.1 + r * e.1);
                let old = out.insert(p, depth + r as u64);
                assert!(old.is_none_or(|o| o == depth + r as u64), "two depths at {p:?}");
            }
            go((pos.0 + len * e.0, pos.1 + len * e.1), j + 1, k, Some(e), depth + len as u64, out);
        }
    }
    let mut out = HashMap::new();
    go((1 << (2 * k), 0), 0, k, None, 0, &mut out);
    out
}

#[test]
fn decomposition_agrees_with_the_walk() {
    for k in 1..=4u32 {
        let tree = walk_tree(k);
        let reach = (1i64 << (k + 1)) + 2;
        let a = 1i64 << (2 * k);
        for x in a - reach..=a + reach {
            for y in -reach..=reach {
                let p = VertexId::point(&[x, y]);
                match (decompose_ak(p, k), tree.get(&(x, y))) {
                    (Some(dec), Some(&depth)) => {
                        assert_eq!(dec.depth(), depth, "{p} in A_{k}");
                        assert_eq!(dec.recompose(), p);
                    }
                    (None, None) => {}
                    (dec, walk) => panic!("{p} in A_{k}: decomposition {dec:?}, walk {walk:?}"),
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_round_trips(k in 1u32..=4, pick in any::<prop::sample::Index>()) {
        let tree = walk_tree(k);
        let mut pts: Vec<_> = tree.keys().copied().collect();
        pts.sort_unstable();
        let (x, y) = pts[pick.index(pts.len())];
        let p = VertexId::point(&[x, y]);
        let dec = decompose_ak(p, k).unwrap();
        prop_assert_eq!(dec.recompose(), p);
        prop_assert_eq!(dec.depth(), tree[&(x, y)]);
    }

    #[test]
    fn boundary_sandwich(
        cells in prop::collection::btree_set((-4i64..=4, -4i64..=4), 1..20),
        h in 1 as Length..=3,
        extra in 0 as Length..=3,
    ) {
        let z2 = Lattice::new(2, 1);
        let set = SubsetRegion::counted(cells.iter().map(|c| VertexId::point(&[c.0, c.1])));
        let b = h_boundary(&z2, &set, h, Budget::default()).unwrap();
        let nbhd = neighborhood(&z2, &set, h, Budget::default()).unwrap();
        let wider = h_boundary(&z2, &set, h + extra, Budget::default()).unwrap();
        prop_assert!(b.is_subset(&nbhd));
        prop_assert!(b.is_subset(&wider));
    }

    #[test]
    fn boundary_matches_an_explicit_complement(
        n in 3usize..=12,
        raw in prop::collection::vec((0usize..12, 0usize..12, 1 as Length..=3), 0..30),
        mask in any::<u16>(),
        h in 1 as Length..=4,
    ) {
        let edges: Vec<_> = raw.into_iter().filter(|e| e.0 < n && e.1 < n && e.0 != e.1).collect();
        let vertices: Vec<_> = (0..n).map(|i| VertexId::point(&[i as i64])).collect();
        let space = FiniteSpace::from_edges(1, vertices.clone(), &edges, None).unwrap();
        let inside = |i: usize| mask & (1 << i) != 0;
        let set = SubsetRegion::counted((0..n).filter(|&i| inside(i)).map(|i| vertices[i]));
        let fast = h_boundary(&space, &set, h, Budget::default()).unwrap();
        let near = |x: usize, y: usize| {
            distance(&space, vertices[x], vertices[y], h, Budget::default()).unwrap().is_some()
        };
        let slow = SubsetRegion::counted((0..n).filter(|&x| {
            (0..n).any(|a| inside(a) && near(x, a)) && (0..n).any(|b| !inside(b) && near(x, b))
        }).map(|x| vertices[x]));
        prop_assert_eq!(fast, slow);
    }
}
