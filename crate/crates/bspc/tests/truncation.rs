//! Exhaustive prefix fuzz: cutting the byte stream at every possible
//! length must yield a truncation error — never a panic, never a
//! successfully parsed partial matrix.

use bsp_core::CoreError;
use bsp_prune::BlockPartition;
use bspc::{deserialize, serialize, BspcError, BspcMatrix};

fn sample(with_perm: bool) -> BspcMatrix {
    // Two strips and two blocks, one empty block, one empty strip span.
    let perm = with_perm.then(|| vec![4, 0, 2]);
    BspcMatrix::new(
        5,
        4,
        BlockPartition::new(2, 2).unwrap(),
        vec![0, 2, 4],
        vec![vec![vec![1], vec![2, 3]], vec![vec![0, 1], vec![]]],
        vec![
            vec![vec![1.5, -2.0], vec![0.25, 0.0, 3.0, 4.0]],
            vec![vec![5.0, 6.0], vec![]],
        ],
        perm,
    )
    .unwrap()
}

#[test]
fn every_strict_prefix_is_a_truncation_error() {
    for with_perm in [false, true] {
        let bytes = serialize(&sample(with_perm));
        assert!(deserialize(&bytes).is_ok(), "full file must parse");
        for len in 0..bytes.len() {
            match deserialize(&bytes[..len]) {
                Err(BspcError::Core(CoreError::Truncated { offset })) => {
                    assert!(
                        offset <= len,
                        "prefix {len} (perm={with_perm}): offset {offset} past the cut"
                    );
                }
                Ok(_) => panic!("prefix {len} (perm={with_perm}) parsed successfully"),
                Err(other) => {
                    panic!("prefix {len} (perm={with_perm}): unexpected error {other:?}")
                }
            }
        }
    }
}

#[test]
fn empty_input_fails_at_offset_zero() {
    match deserialize(&[]) {
        Err(BspcError::Core(CoreError::Truncated { offset: 0 })) => {}
        other => panic!("expected truncation at 0, got {other:?}"),
    }
}
