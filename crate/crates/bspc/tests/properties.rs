//! Randomized invariants: lossless roundtrips, CSR agreement, and the
//! index-compactness guarantee.

use bsp_core::DenseMatrix;
use bsp_prune::{BlockPartition, StructuredMask};
use bspc::{deserialize, encode, has_two_by_two_grid, index_overhead, serialize, CsrMatrix};
use proptest::prelude::*;

/// A random block partition, a mask over it, and a matrix whose support
/// lies inside the mask (values may still be zero inside it).
fn arb_case() -> impl Strategy<Value = (DenseMatrix, StructuredMask)> {
    (1usize..=10, 1usize..=10, 1usize..=4, 1usize..=4)
        .prop_flat_map(|(rows, cols, num_r, num_c)| {
            let part = BlockPartition::new(num_r, num_c).unwrap();
            (
                Just(rows),
                Just(cols),
                Just(part),
                proptest::collection::vec(any::<bool>(), rows),
                proptest::collection::vec(any::<bool>(), part.strip_count(rows) * cols),
                proptest::collection::vec(-5.0f64..5.0, rows * cols),
            )
        })
        .prop_map(|(rows, cols, part, row_bits, col_bits, vals)| {
            let kept_rows = row_bits
                .iter()
                .enumerate()
                .filter_map(|(i, &keep)| keep.then_some(i as u32))
                .collect();
            let kept_cols = part
                .strips(rows)
                .enumerate()
                .map(|(s, _)| {
                    part.blocks(cols)
                        .map(|block| {
                            block
                                .filter(|&c| col_bits[s * cols + c])
                                .map(|c| c as u32)
                                .collect()
                        })
                        .collect()
                })
                .collect();
            let mask = StructuredMask::new(rows, cols, part, kept_rows, kept_cols).unwrap();
            let mut m = DenseMatrix::from_vec(rows, cols, vals).unwrap();
            mask.apply(&mut m);
            (m, mask)
        })
}

proptest! {
    /// Packing and unpacking reproduces the matrix exactly.
    #[test]
    fn decode_of_encode_is_identity((m, mask) in arb_case()) {
        let b = encode(&m, &mask).unwrap();
        prop_assert_eq!(b.decode(), m);
    }

    /// The byte form roundtrips every field, optional permutation included.
    #[test]
    fn serialize_roundtrips((m, mask) in arb_case(), with_perm in any::<bool>()) {
        let mut b = encode(&m, &mask).unwrap();
        if with_perm {
            let reversed: Vec<u32> = b.kept_rows().iter().rev().copied().collect();
            b.set_row_perm(reversed).unwrap();
        }
        let back = deserialize(&serialize(&b)).unwrap();
        prop_assert_eq!(back, b);
    }

    /// CSR built over the compact form describes the same matrix.
    #[test]
    fn csr_view_matches_decode((m, mask) in arb_case()) {
        let b = encode(&m, &mask).unwrap();
        let csr = CsrMatrix::from_bspc(&b);
        prop_assert_eq!(csr.to_dense(), b.decode());
        prop_assert_eq!(csr.nnz(), b.nnz());
        prop_assert!(csr.row_ptr().windows(2).all(|w| w[0] <= w[1]));
    }

    /// The compact index never stores more integers than CSR would, and
    /// beats it outright once any kept grid reaches 2x2.
    #[test]
    fn index_never_exceeds_csr((m, mask) in arb_case()) {
        let b = encode(&m, &mask).unwrap();
        let o = index_overhead(&b);
        prop_assert!(o.bspc_index_entries <= o.csr_index_entries);
        if has_two_by_two_grid(&b) {
            prop_assert!(o.bspc_index_entries < o.csr_index_entries);
        }
    }
}
