use approxeq::document::{
    parse_game, parse_result, serialize_game, serialize_result, BiasedDoc, GameDocument, GameModel, PenaltyDoc,
};
use approxeq::generate::generate_random_game;
use approxeq_core::approx::base_algorithm;
use approxeq_core::{LipschitzVerdict, NormKind, Player};
use proptest::prelude::*;

#[test]
fn generated_game_round_trips_exactly() {
    for seed in 0..20 {
        let g = generate_random_game(5, NormKind::Linf, NormKind::L1, 0.3, 0.7, seed).unwrap();
        let doc = GameDocument::Biased(BiasedDoc::from_game(&g));
        let text = serialize_game(&doc);
        let parsed = parse_game(&text).unwrap();
        assert_eq!(parsed.doc, doc);
        assert_eq!(serialize_game(&parsed.doc), text);
        let GameModel::Biased(h) = parsed.model else { panic!("biased expected") };
        assert_eq!(h.game(), g.game());
        assert_eq!(h.base(Player::Col), g.base(Player::Col));
    }
}

#[test]
fn result_round_trips_exactly() {
    let g = generate_random_game(7, NormKind::L2Sq, NormKind::L2Sq, 1.0, 1.0, 11).unwrap();
    let v = LipschitzVerdict::Equilibrium(base_algorithm(&g).unwrap());
    let text = serialize_result(&v);
    assert_eq!(parse_result(&text).unwrap(), v);
    assert_eq!(serialize_result(&parse_result(&text).unwrap()), text);
}

#[test]
fn penalty_document_from_biased() {
    let g = generate_random_game(3, NormKind::L1, NormKind::Inner, 0.2, 0.9, 2).unwrap();
    let doc = PenaltyDoc::from_biased(&BiasedDoc::from_game(&g)).unwrap();
    let pg = doc.build().unwrap();
    let x = [0.2, 0.5, 0.3];
    let expected = 0.2 * approxeq_core::penalty_value(&x, g.base(Player::Row).probs(), NormKind::L1).unwrap();
    assert!((pg.penalty(Player::Row).eval(&x) - expected).abs() < 1e-15);
    assert!(serialize_game(&GameDocument::Penalty(doc)).contains("\"inner\""));
}

#[test]
fn errors_name_the_location() {
    let cases = [
        (r#"{"type":"biased","row":[[1,0],[0,1]],"col":[[0,1],[1,2]],"norm_row":"l1","norm_col":"l1","d_row":0,"d_col":0}"#, "[1][1]"),
        (r#"{"type":"biased","row":[[1,0],[0]],"col":[[0,1],[1,0]],"norm_row":"l1","norm_col":"l1","d_row":0,"d_col":0}"#, "row 1"),
        (r#"{"type":"biased","row":[[1,0],[0,1]],"col":[[0,1],[1,0]],"norm_row":"l1","norm_col":"l1","d_row":0}"#, "d_col"),
        (r#"{"type":"biased","row":[[1,0],[0,1]],"col":[[0,1],[1,0]],"base_row":[0.5,0.6],"norm_row":"l1","norm_col":"l1","d_row":0,"d_col":0}"#, "base_row"),
        (r#"{"type":"matrix"}"#, "type"),
        (r#"{"row":[]}"#, "type"),
        (r#"{"type":"penalty","row":[[1]],"col":[[1]],"penalty_row":{"kind":"l7","d":1},"penalty_col":{"kind":"zero"}}"#, "penalty_row.kind"),
        (r#"{"type":"lipschitz","row":[[1]],"col":[[1]],"utility":"python"}"#, "utility"),
        ("{\"type\":\"biased\",\n\"row\":[[1,0],[0,1]],\n\"col\": oops}", "line 3"),
    ];
    for (text, needle) in cases {
        let err = parse_game(text).unwrap_err().to_string();
        assert!(err.contains(needle), "{needle:?} missing from {err:?}");
    }
}

proptest! {
    #[test]
    fn floats_survive_the_round_trip(seed in any::<u64>(), n in 1usize..6) {
        let g = generate_random_game(n, NormKind::L2Sq, NormKind::Inner, 0.5, 0.25, seed).unwrap();
        let doc = GameDocument::Biased(BiasedDoc::from_game(&g));
        let parsed = parse_game(&serialize_game(&doc)).unwrap();
        prop_assert_eq!(parsed.doc, doc);
    }
}
