use proptest::prelude::*;
use puzzles_core::params::{format_params, parse_params, ParamError};
use puzzles_core::puzzles::PuzzleId;

/// Valid canonical strings for every puzzle.
fn valid_params() -> impl Strategy<Value = (PuzzleId, String)> {
    let dims = (1u32..=12, 1u32..=12);
    prop_oneof![
        (2u32..=12, 1u32..=12).prop_map(|(w, h)| (PuzzleId::Fifteen, format!("{w}x{h}"))),
        (2u32..=12, 1u32..=12).prop_map(|(w, h)| (PuzzleId::Sixteen, format!("{w}x{h}"))),
        (3u32..=12, 3u32..=12).prop_map(|(w, h)| (PuzzleId::Cube, format!("c{w}x{h}"))),
        (dims.clone(), any::<bool>())
            .prop_map(|((w, h), c)| (PuzzleId::Flip, format!("{w}x{h}{}", if c { "c" } else { "" }))),
        (dims.clone(), 2u32..=10, 0u32..=20).prop_map(|((w, h), c, m)| (PuzzleId::Flood, format!("{w}x{h}c{c}m{m}"))),
        ((2u32..=9, 1u32..=9), 0u32..=3).prop_map(|((w, h), b)| (PuzzleId::Net, format!("{w}x{h}b{b}"))),
        ((2u32..=9, 1u32..=9), 0u32..=3).prop_map(|((w, h), b)| (PuzzleId::Netslide, format!("{w}x{h}b{b}"))),
        (dims.clone(), 2u32..=9, 1u32..=4).prop_map(|((w, h), c, s)| (PuzzleId::SameGame, format!("{w}x{h}c{c}s{s}"))),
        (2u32..=9, 2u32..=9, any::<bool>()).prop_flat_map(|(w, h, r)| (2..=w.min(h)).prop_map(move |n| {
            (PuzzleId::Twiddle, format!("{w}x{h}n{n}{}", if r { "r" } else { "" }))
        })),
        (4u32..=32).prop_map(|n| (PuzzleId::Untangle, n.to_string())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn canonical_strings_round_trip((id, text) in valid_params()) {
        let (map, seed) = parse_params(id, &text).unwrap();
        prop_assert_eq!(seed, None);
        prop_assert_eq!(format_params(id, &map).unwrap(), text);
    }

    #[test]
    fn seed_suffix_round_trips((id, text) in valid_params(), seed in any::<u64>()) {
        let (map, parsed) = parse_params(id, &format!("{text}#{seed}")).unwrap();
        prop_assert_eq!(parsed, Some(seed));
        prop_assert_eq!(format_params(id, &map).unwrap(), text);
    }

    #[test]
    fn formatting_is_idempotent((id, text) in valid_params()) {
        let (map, _) = parse_params(id, &text).unwrap();
        let once = format_params(id, &map).unwrap();
        let (again, _) = parse_params(id, &once).unwrap();
        prop_assert_eq!(again, map);
    }

    #[test]
    fn arbitrary_text_never_panics(id in 0usize..10, text in ".{0,24}") {
        let _ = parse_params(PuzzleId::ALL[id], &text);
    }
}

#[test]
fn rejections_are_typed() {
    assert!(matches!(parse_params(PuzzleId::Flood, "3x3c6m5#x"), Err(ParamError::MalformedSeed(_))));
    assert!(matches!(parse_params(PuzzleId::Flood, "3y3"), Err(ParamError::MalformedParams { .. })));
    assert!(matches!(parse_params(PuzzleId::Twiddle, "2x2n3"), Err(ParamError::InvalidParamCombination { .. })));
    assert!(matches!("tetris".parse::<PuzzleId>(), Err(ParamError::UnknownPuzzle(_))));
}
