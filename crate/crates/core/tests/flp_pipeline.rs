mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::random_tasks::random_carrier_task;
use wfdecide::closure::{decide, ClosureOptions, Verdict};
use wfdecide::covering::{covering_task, gen_cyclic_cover};
use wfdecide::flp::{
    flp_from_round_reduction, verify_transcript, FlpOutcome, HonestOracle, StubbornOracle, Transcript,
};
use wfdecide::task::ColorlessTask;

fn opts() -> ClosureOptions {
    ClosureOptions::default()
}

fn stubborn_transcript(t: &ColorlessTask, n: usize, steps: usize) -> Transcript {
    match flp_from_round_reduction(t, n, &mut StubbornOracle, steps, &opts()).unwrap() {
        FlpOutcome::Transcript(tr) => tr,
        FlpOutcome::Concedes { reason, .. } => panic!("prover conceded: {reason}"),
    }
}

#[test]
fn unsolvable_tasks_yield_verified_transcripts() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut checked = 0;
    for _ in 0..150 {
        let t = random_carrier_task(&mut rng);
        let n = t.default_processes();
        if !matches!(decide(&t, n, &opts()).unwrap(), Verdict::Unsolvable { .. }) {
            continue;
        }
        let tr = stubborn_transcript(&t, n, 12);
        assert_eq!(tr.steps.len(), 12);
        assert_eq!(verify_transcript(&t, n, &tr, &opts()).diagnosis, None);
        let back: Transcript = serde_json::from_str(&serde_json::to_string(&tr).unwrap()).unwrap();
        assert!(verify_transcript(&t, n, &back, &opts()).valid);
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} unsolvable tasks in the sample");
}

#[test]
fn honest_oracles_always_win_in_time() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut checked = 0;
    for _ in 0..150 {
        let t = random_carrier_task(&mut rng).restrict_input(1);
        let Verdict::Solvable { rounds, witness } = decide(&t, 2, &opts()).unwrap() else {
            continue;
        };
        let mut oracle = HonestOracle::new(&t, 2, witness.assignment, rounds, &opts().limits).unwrap();
        match flp_from_round_reduction(&t, 2, &mut oracle, rounds + 3, &opts()).unwrap() {
            FlpOutcome::Concedes { partial, .. } => {
                assert!(partial.map_or(0, |p| p.steps.len()) <= rounds);
            }
            FlpOutcome::Transcript(_) => panic!("a solving algorithm was defeated"),
        }
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} solvable tasks in the sample");
}

#[test]
fn covering_tasks_resist_forever() {
    for (m, k) in [(3, 2), (3, 3), (4, 2), (5, 2)] {
        let t = covering_task(&gen_cyclic_cover(m, k).unwrap()).unwrap();
        let tr = stubborn_transcript(&t, 2, 25);
        assert!(verify_transcript(&t, 2, &tr, &opts()).valid, "cover {m},{k}");
    }
}

#[test]
fn deeper_runs_extend_shallower_ones() {
    let t = covering_task(&gen_cyclic_cover(4, 2).unwrap()).unwrap();
    let short = stubborn_transcript(&t, 2, 5);
    let long = stubborn_transcript(&t, 2, 15);
    assert_eq!(short.steps[..], long.steps[..5]);
}
