//! Regenerates the synthetic code fixtures under `codes/`.
//!
//! The committed files are deterministic outputs of the seeded samplers
//! below; run `cargo test -p mpb-ldpc --test gen_fixtures -- --ignored`
//! after changing the generators and commit the result.

use mpb_ldpc::code::{random_code_from_degree_sequences, random_regular_code, write_alist};
use std::path::PathBuf;

fn codes_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../codes")
}

/// Degree profile of the (576, 288) rate-1/2 fixture: check degrees split
/// 6/7, variable degrees in {2, 3, 6}, mirroring the irregular profile of
/// the 802.16e rate-1/2 class.
fn wimax_like_degrees() -> (Vec<usize>, Vec<usize>) {
    let mut var_degrees = Vec::with_capacity(576);
    var_degrees.extend(std::iter::repeat_n(6, 96));
    var_degrees.extend(std::iter::repeat_n(3, 336));
    var_degrees.extend(std::iter::repeat_n(2, 144));
    let mut check_degrees = Vec::with_capacity(288);
    check_degrees.extend(std::iter::repeat_n(6, 144));
    check_degrees.extend(std::iter::repeat_n(7, 144));
    (var_degrees, check_degrees)
}

#[test]
#[ignore = "writes the committed fixtures; run explicitly"]
fn regenerate_fixture_codes() {
    let dir = codes_dir();
    std::fs::create_dir_all(&dir).unwrap();

    let triple = mpb_ldpc::ParityCheckMatrix::from_rows(3, vec![vec![0, 1, 2]]).unwrap();
    std::fs::write(dir.join("triple.alist"), write_alist(&triple)).unwrap();

    let margulis_like = random_regular_code(2640, 3, 6, 20260808).unwrap();
    assert_eq!(margulis_like.m(), 1320);
    std::fs::write(dir.join("margulis_like_2640_1320.alist"), write_alist(&margulis_like)).unwrap();

    let (var_degrees, check_degrees) = wimax_like_degrees();
    let wimax_like = random_code_from_degree_sequences(&var_degrees, &check_degrees, 802160).unwrap();
    assert_eq!(wimax_like.m(), 288);
    assert_eq!(wimax_like.n(), 576);
    std::fs::write(dir.join("wimax_like_576_288.alist"), write_alist(&wimax_like)).unwrap();
}
