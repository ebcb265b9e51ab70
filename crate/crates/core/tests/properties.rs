use khtorsion_core::jones::{state_sum_jones, LaurentPolynomial};
use khtorsion_core::linalg::rank::rank_mod2;
use khtorsion_core::linalg::{rank_over_field, smith_normal_form, smith_normal_form_dense, SparseMatrix};
use khtorsion_core::{khovanov_homology, parse_pd, CubeLimits, PlanarDiagram, Ring};
use num_bigint::BigInt;
use proptest::prelude::*;

const DIAGRAMS: [&str; 4] = [
    "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]",
    "PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]",
    "PD[X(1,4,2,5),X(3,8,4,9),X(5,10,6,1),X(9,6,10,7),X(7,2,8,3)]",
    "PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]",
];

fn matrix(max_dim: usize, max_entry: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-max_entry..=max_entry, c), r)
    })
}

fn sparse_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    // mostly zeros, like coboundary matrices
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(
            prop::collection::vec(prop_oneof![6 => Just(0i64), 1 => Just(1), 1 => Just(-1), 1 => -3i64..=3], c),
            r,
        )
    })
}

fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect())
        .collect()
}

/// Elementary unimodular row operations applied to `m`.
fn scramble(m: &[Vec<i64>], ops: &[(usize, usize, i64, bool)]) -> Vec<Vec<i64>> {
    let mut m = m.to_vec();
    let rows = m.len();
    for &(a, b, k, swap) in ops {
        let (a, b) = (a % rows, b % rows);
        if swap {
            m.swap(a, b);
        } else if a != b {
            let src = m[b].clone();
            for (x, y) in m[a].iter_mut().zip(src) {
                *x += k * y;
            }
        }
    }
    m
}

fn relabel(d: &PlanarDiagram, perm: &[u32]) -> PlanarDiagram {
    let xs = d.crossings().iter().map(|x| x.map(|a| perm[a as usize - 1])).collect();
    PlanarDiagram::new(xs, d.unknots()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_invariant_under_unimodular_ops(
        m in matrix(6, 9),
        ops in prop::collection::vec((0usize..6, 0usize..6, -3i64..=3, any::<bool>()), 0..12),
    ) {
        let a = SparseMatrix::from_dense(&m);
        let b = SparseMatrix::from_dense(&scramble(&m, &ops));
        prop_assert_eq!(smith_normal_form(&a).diagonal, smith_normal_form(&b).diagonal.clone());
        let at = a.transpose();
        prop_assert_eq!(smith_normal_form(&a).diagonal, smith_normal_form(&at).diagonal);
    }

    #[test]
    fn sparse_and_dense_snf_agree(m in sparse_matrix(9)) {
        let a = SparseMatrix::from_dense(&m);
        let s = smith_normal_form(&a);
        let d = smith_normal_form_dense(&a);
        prop_assert_eq!(&s.diagonal, &d.diagonal);
        for w in s.diagonal.windows(2) {
            prop_assert_eq!(&w[1] % &w[0], 0u32.into());
        }
    }

    #[test]
    fn dense_snf_transforms_diagonalize(m in matrix(5, 6)) {
        let a = SparseMatrix::from_dense(&m);
        let s = smith_normal_form_dense(&a);
        let prod = matmul(&matmul(s.left.as_ref().unwrap(), &to_big(&m)), s.right.as_ref().unwrap());
        for (r, row) in prod.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let want = if r == c && r < s.rank() { BigInt::from(s.diagonal[r].clone()) } else { BigInt::from(0) };
                prop_assert_eq!(v, &want);
            }
        }
    }

    #[test]
    fn field_ranks_bound_each_other(m in sparse_matrix(10)) {
        let a = SparseMatrix::from_dense(&m);
        let q = rank_over_field(&a, 0);
        let z2 = rank_over_field(&a, 2);
        prop_assert_eq!(q, smith_normal_form(&a).rank());
        prop_assert!(q >= z2);
        prop_assert_eq!(z2, rank_mod2(&a));
        let even = smith_normal_form(&a).diagonal.iter().filter(|d| !d.bit(0)).count();
        prop_assert_eq!(z2, q - even);
    }

    #[test]
    fn quantum_two_division_inverts_multiplication(terms in prop::collection::vec((-12i32..12, -20i64..20), 0..8)) {
        let p = LaurentPolynomial::from_terms(terms);
        let prod = p.mul(&LaurentPolynomial::quantum_two());
        prop_assert_eq!(prod.div_quantum_two(), Some(p));
    }

    #[test]
    fn diagram_round_trip_and_mirror(
        (k, perm) in (0..DIAGRAMS.len()).prop_flat_map(|k| {
            let n = 2 * parse_pd(DIAGRAMS[k]).unwrap().crossing_count() as u32;
            (Just(k), Just((1..=n).collect::<Vec<u32>>()).prop_shuffle())
        }),
    ) {
        let d = parse_pd(DIAGRAMS[k]).unwrap();
        prop_assert_eq!(parse_pd(&d.to_string()).unwrap(), d.clone());
        prop_assert_eq!(d.mirror().mirror(), d.clone());
        prop_assert_eq!(d.mirror().writhe(), -d.writhe());

        let e = relabel(&d, &perm);
        prop_assert_eq!(e.writhe(), d.writhe());
        prop_assert_eq!(e.n_components(), d.n_components());
        let lim = CubeLimits::default();
        prop_assert_eq!(state_sum_jones(&e, lim).unwrap(), state_sum_jones(&d, lim).unwrap());
    }
}

#[test]
fn mirror_negates_gradings_over_fields() {
    for pd in DIAGRAMS {
        let d = parse_pd(pd).unwrap();
        let h = khovanov_homology(&d, Ring::Q).unwrap();
        let m = khovanov_homology(&d.mirror(), Ring::Q).unwrap();
        let mut flipped: Vec<_> = h.entries().map(|((i, j), g)| ((-i, -j), g.free_rank)).collect();
        let got: Vec<_> = m.entries().map(|(b, g)| (b, g.free_rank)).collect();
        flipped.sort();
        assert_eq!(got, flipped, "{pd}");
    }
}
