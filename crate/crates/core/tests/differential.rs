use bpictl::checker::eval;
use bpictl::cli;
use bpictl::oracle::denote;
use bpictl::random::{random_formula_for, random_model, ModelShape};
use bpictl::textio::{parse_formula, parse_model, render_formula, render_model};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sample(seed: u64, depth: usize) -> (bpictl::kernel::Model, bpictl::kernel::Formula) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_model(&mut rng, &ModelShape::default());
    let f = random_formula_for(&mut rng, &m, depth);
    (m, f)
}

fn cli_states(model: &std::path::Path, formula: &str, oracle: bool) -> (i32, String) {
    let mut args = vec!["bpictl", "check", model.to_str().unwrap(), "-e", formula];
    if oracle {
        args.push("--oracle");
    }
    let mut out = Vec::new();
    let status = cli::run(args, &mut out, &mut std::io::sink());
    (status.code, String::from_utf8(out).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn checker_matches_oracle(seed in any::<u64>(), depth in 0usize..=5) {
        let (m, f) = sample(seed, depth);
        prop_assert_eq!(eval(&m, &f).unwrap(), denote(&m, &f).unwrap(), "{}", f);
    }

    #[test]
    fn check_and_check_oracle_print_the_same(seed in any::<u64>()) {
        let (m, f) = sample(seed, 4);
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("m.bpm");
        std::fs::write(&file, render_model(&m)).unwrap();
        let text = render_formula(&f);
        let a = cli_states(&file, &text, false);
        let b = cli_states(&file, &text, true);
        prop_assert_eq!(a.0, 0);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn text_round_trips(seed in any::<u64>()) {
        let (m, f) = sample(seed, 5);
        let text = render_formula(&f);
        prop_assert_eq!(&parse_formula(&text).unwrap(), &f);
        let model_text = render_model(&m);
        let back = parse_model(&model_text).unwrap();
        prop_assert_eq!(render_model(&back), model_text);
        prop_assert_eq!(back, m);
    }
}
