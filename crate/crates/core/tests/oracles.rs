use powerkit_core::eu::{load_council_configs, shipped_data_dir};
use powerkit_core::indices::{self, IndexKind};
use powerkit_core::rational::ratio;
use powerkit_core::solution::{self, has_justified_objection, nucleolus_oracle, ORACLE_LIMIT};
use powerkit_core::{Execution, VotingGame, WeightedRule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_game(rng: &mut ChaCha8Rng, k: usize) -> VotingGame {
    let n = rng.random_range(2..=10);
    let rules = rng.random_range(1..=2);
    let rules = (0..rules)
        .map(|_| loop {
            let w: Vec<u64> = (0..n).map(|_| rng.random_range(0..=12)).collect();
            let total: u64 = w.iter().sum();
            if total > 1 {
                let quota = rng.random_range(total / 2 + 1..=total);
                break WeightedRule::from_integers(&w, quota).unwrap();
            }
        })
        .collect();
    VotingGame::new(format!("random-{k}"), (0..n).map(|i| format!("P{i}")).collect(), rules).unwrap()
}

fn random_games() -> Vec<VotingGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_120_101);
    (0..200).map(|k| random_game(&mut rng, k)).collect()
}

#[test]
fn row_generation_matches_the_explicit_oracle() {
    let mut games: Vec<VotingGame> = load_council_configs(&shipped_data_dir())
        .unwrap()
        .into_iter()
        .map(|c| c.game)
        .filter(|g| g.n() <= ORACLE_LIMIT)
        .collect();
    assert_eq!(games.len(), 6);
    games.extend(random_games());
    for g in &games {
        let fast = solution::nucleolus(g).unwrap();
        let oracle = nucleolus_oracle(g).unwrap();
        assert_eq!(fast, oracle, "{}", g.name());
    }
}

#[test]
fn counting_path_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for g in random_games().into_iter().chain((0..100).map(|k| random_game(&mut rng, k))) {
        if g.rules().len() != 1 {
            continue;
        }
        let dp = indices::shapley_shubik_dp(&g).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(dp, indices::shapley_shubik_enumerated(&g, exec).unwrap(), "{}", g.name());
        }
        checked += 1;
    }
    assert!(checked > 100);
    for c in load_council_configs(&shipped_data_dir()).unwrap() {
        if c.game.rules().len() == 1 {
            let dp = indices::shapley_shubik_dp(&c.game).unwrap();
            let brute = indices::shapley_shubik_enumerated(&c.game, Execution::default()).unwrap();
            assert_eq!(dp, brute, "{}", c.period_label());
            let banzhaf = indices::banzhaf(&c.game).unwrap();
            assert_eq!(banzhaf, indices::banzhaf_enumerated(&c.game, Execution::Sequential).unwrap());
        }
    }
}

#[test]
fn nucleolus_is_in_the_bargaining_set_for_small_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut games = vec![
        VotingGame::from_integer_weights("vetoer", &[2, 1, 1], 3).unwrap(),
        VotingGame::majority(3).unwrap(),
        VotingGame::majority(5).unwrap(),
        VotingGame::from_integer_weights("w", &[3, 2, 2, 1, 1], 6).unwrap(),
    ];
    while games.len() < 30 {
        let g = random_game(&mut rng, games.len());
        if g.n() <= 5 {
            games.push(g);
        }
    }
    for g in &games {
        let x = solution::nucleolus(g).unwrap().values;
        assert_eq!(has_justified_objection(g, &x).unwrap(), None, "{}", g.name());
    }
}

#[test]
fn vetoer_example() {
    let g = VotingGame::from_integer_weights("vetoer", &[2, 1, 1], 3).unwrap();
    let ssi = indices::compute(&g, IndexKind::ShapleyShubik).unwrap().values;
    assert_eq!(ssi, vec![ratio(2, 3), ratio(1, 6), ratio(1, 6)]);
    let objection = has_justified_objection(&g, &ssi).unwrap().unwrap();
    assert_eq!(objection.objector, 0);
    let nucl = solution::nucleolus(&g).unwrap().values;
    assert_eq!(nucl, vec![ratio(1, 1), ratio(0, 1), ratio(0, 1)]);
    assert_eq!(has_justified_objection(&g, &nucl).unwrap(), None);
    assert_eq!(g.vetoers(), vec![0]);
    assert!(solution::core_nonempty(&g).unwrap());
}
