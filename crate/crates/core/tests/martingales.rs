use depthlab_core::predictors::{betting_game_trace, martingale_log, predictor_perf, PredictorSpec};
use depthlab_core::BitString;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn specs() -> Vec<PredictorSpec> {
    vec![
        PredictorSpec::Uniform,
        PredictorSpec::Frequency,
        PredictorSpec::Markov { order: 1 },
        PredictorSpec::Markov { order: 3 },
    ]
}

fn random_word(rng: &mut ChaCha8Rng, max: usize) -> BitString {
    let len = rng.gen_range(0..max);
    let bias = rng.gen_range(0.05..0.95);
    (0..len).map(|_| rng.gen_bool(bias)).collect()
}

#[test]
fn capital_is_fair() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..2000 {
        let w = random_word(&mut rng, 60);
        for p in specs() {
            let d = martingale_log(&p, &w).exp2();
            let mut w0 = w.clone();
            w0.push(false);
            let mut w1 = w.clone();
            w1.push(true);
            let sum = martingale_log(&p, &w0).exp2() + martingale_log(&p, &w1).exp2();
            assert!((sum - 2.0 * d).abs() <= 1e-9 * 2.0 * d, "{p:?} {w}");
        }
    }
}

#[test]
fn game_matches_product_on_long_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let w = random_word(&mut rng, 3000);
        for p in specs() {
            let a = martingale_log(&p, &w);
            let b = betting_game_trace(&p, &w).last();
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{p:?}: {a} vs {b}");
        }
    }
}

#[test]
fn uniform_is_flat_and_oracle_is_perfect() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let w = random_word(&mut rng, 500);
        assert!(betting_game_trace(&PredictorSpec::Uniform, &w).log2_values.iter().all(|&v| v == 0.0));
        if !w.is_empty() {
            let oracle = PredictorSpec::Oracle { target: w.clone() };
            assert_eq!(predictor_perf(&oracle, &w).value(), 1.0);
        }
    }
}
