//! Acceptance suite: one test per shipped guarantee, each printing a
//! pass/fail line (visible with `cargo test -- --nocapture`) and enforcing
//! its time budget. Criteria 1 and 2 drive the actual binary; the rest
//! exercise the library surface directly.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use veemap::bowenfranks::{bf_group, smith_normal_form, snf_invariants_hold, IntMatrix};
use veemap::flow::{
    orbit_fixed_check, random_admissible_orbit, simulate_embedding, CodedAlphabet, FlowOrbit,
    InducedMap,
};
use veemap::lang::{
    find_marker_words, is_locally_testable, is_unbordered, parse_regex, Alphabet, Dfa,
    SyntacticMonoid,
};
use veemap::subshift::VertexShift;
use veemap::thompson::{generators, random_tv_element, random_v_element, TwoVElement, VElement};
use veemap::veelike::{target_language, PairVeelikeRule, VeelikeRule, WordPair};

fn run_cli(args: &[&str]) -> (i32, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_veemap"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8(output.stdout).expect("utf8 output"),
    )
}

fn finish(id: &str, what: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < budget,
        "{id} exceeded its {budget:?} budget: {elapsed:?}"
    );
    println!("[PASS] {id} {what} ({elapsed:?})");
}

const THREE_MATRIX: [[u64; 3]; 3] = [[1, 1, 0], [1, 1, 1], [1, 1, 1]];
const SIX_MATRIX: [[u64; 6]; 6] = [
    [1, 1, 1, 0, 0, 0],
    [1, 1, 1, 0, 0, 0],
    [0, 0, 0, 1, 1, 1],
    [0, 0, 0, 1, 1, 0],
    [0, 0, 0, 1, 1, 1],
    [0, 1, 1, 0, 0, 0],
];

fn three_shift() -> VertexShift {
    let a = Alphabet::new(["0", "1", "2"]).unwrap();
    VertexShift::new(a, THREE_MATRIX.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn six_shift() -> VertexShift {
    let a = Alphabet::new(["0_A", "1_A", "@", "0_B", "1_B", "#"]).unwrap();
    VertexShift::new(a, SIX_MATRIX.iter().map(|r| r.to_vec()).collect()).unwrap()
}

#[test]
fn acceptance_01_three_symbol_hull_matrix() {
    let start = Instant::now();
    let (code, stdout) = run_cli(&["hull", "--regex", "eps+(0+1)*1", "--sep", "2"]);
    assert_eq!(code, 0);
    let shift: VertexShift = serde_json::from_str(&stdout).expect("matrix JSON");
    assert_eq!(shift, three_shift());
    // equivalently: the forbidden-bigram set is exactly {02}
    let forbidden: Vec<String> = shift
        .to_sft()
        .forbidden()
        .iter()
        .map(|w| shift.alphabet().format(w))
        .collect();
    assert_eq!(forbidden, vec!["02"]);
    // byte-identical reruns
    let (_, again) = run_cli(&["hull", "--regex", "eps+(0+1)*1", "--sep", "2"]);
    assert_eq!(stdout, again);
    finish("01", "three-symbol hull matrix", start, Duration::from_secs(1));
}

#[test]
fn acceptance_02_six_symbol_pair_hull_matrix() {
    let start = Instant::now();
    let (code, stdout) = run_cli(&[
        "hull",
        "--pair",
        "--left-regex",
        "eps+(0+1)*1",
        "--right-regex",
        "eps+(0+1)*1",
    ]);
    assert_eq!(code, 0);
    let shift: VertexShift = serde_json::from_str(&stdout).expect("matrix JSON");
    assert_eq!(shift, six_shift());
    finish("02", "six-symbol pair hull matrix", start, Duration::from_secs(1));
}

// boolean matrix powers for the brute-force mixing definition
fn bool_power(matrix: &[Vec<u64>], k: usize) -> Vec<Vec<bool>> {
    let n = matrix.len();
    let mut result: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
    for _ in 0..k {
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                if result[i][j] {
                    for (t, cell) in next[i].iter_mut().enumerate() {
                        *cell = *cell || matrix[j][t] == 1;
                    }
                }
            }
        }
        result = next;
    }
    result
}

fn brute_mixing(matrix: &[Vec<u64>]) -> bool {
    let n = matrix.len();
    let p12 = bool_power(matrix, 12);
    let fwd: Vec<bool> = (0..n).map(|i| p12[i].iter().any(|&b| b)).collect();
    let bwd: Vec<bool> = (0..n).map(|j| (0..n).any(|i| p12[i][j])).collect();
    let mut admissible: Vec<(usize, usize)> = Vec::new(); // (first, last) of words <= 2
    for s in 0..n {
        if bwd[s] && fwd[s] {
            admissible.push((s, s));
        }
    }
    for s in 0..n {
        for t in 0..n {
            if matrix[s][t] == 1 && bwd[s] && fwd[t] {
                admissible.push((s, t));
            }
        }
    }
    if admissible.is_empty() {
        return true;
    }
    (0..=12usize).any(|steps| {
        let p = bool_power(matrix, steps + 1);
        admissible
            .iter()
            .all(|&(_, u_last)| admissible.iter().all(|&(v_first, _)| p[u_last][v_first]))
    })
}

#[test]
fn acceptance_03_both_shifts_are_mixing() {
    let start = Instant::now();
    // witnesses: the square of the 3x3 matrix is strictly positive, and the
    // 6x6 matrix has a positive power within the Wielandt bound
    assert_eq!(three_shift().primitivity_exponent(), Some(2));
    let k = six_shift().primitivity_exponent().expect("primitive");
    assert!(k <= 26);
    // the brute-force definition agrees on both instances
    let three: Vec<Vec<u64>> = THREE_MATRIX.iter().map(|r| r.to_vec()).collect();
    let six: Vec<Vec<u64>> = SIX_MATRIX.iter().map(|r| r.to_vec()).collect();
    assert!(brute_mixing(&three));
    assert!(brute_mixing(&six));
    // and on every 0/1 matrix of dimension at most 3
    for dim in 1..=3usize {
        for bits in 0..(1u32 << (dim * dim)) {
            let matrix: Vec<Vec<u64>> = (0..dim)
                .map(|i| (0..dim).map(|j| u64::from(bits >> (i * dim + j) & 1)).collect())
                .collect();
            let names: Vec<String> = (0..dim).map(|i| i.to_string()).collect();
            let shift = VertexShift::new(Alphabet::new(names).unwrap(), matrix.clone()).unwrap();
            assert_eq!(shift.is_mixing(), brute_mixing(&matrix), "at {matrix:?}");
        }
    }
    finish("03", "mixing with witnesses", start, Duration::from_secs(5));
}

#[test]
fn acceptance_04_local_testability_gate() {
    let start = Instant::now();
    assert!(is_locally_testable(&target_language(), 2));

    // the hull refuses a language that fails the check (exit code 2)
    let fixture = Dfa::from_parts(
        Alphabet::binary(),
        4,
        0,
        &[0, 1],
        vec![vec![1, 0], vec![1, 2], vec![3, 2], vec![3, 0]],
    )
    .unwrap();
    let dir = std::env::temp_dir().join("veemap-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("parity.json");
    std::fs::write(&path, serde_json::to_string(&fixture).unwrap()).unwrap();
    let (code, stdout) = run_cli(&["hull", "--dfa", path.to_str().unwrap(), "--sep", "2"]);
    assert_eq!(code, 2);
    assert!(stdout.contains("not_locally_testable"));
    finish("04", "local testability gate", start, Duration::from_secs(1));
}

#[test]
fn acceptance_05_veelike_verification_sweep() {
    let start = Instant::now();
    let lang = target_language();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..20 {
        let g = random_v_element(&mut rng, 4);
        let rule = VeelikeRule::from_element(&g);
        let outcome = rule.verify(&lang, 12);
        assert!(outcome.is_pass(), "element {i} failed: {outcome:?}");
    }
    finish("05", "20 random elements verify at length 12", start, Duration::from_secs(30));
}

#[test]
fn acceptance_06_pair_veelike_verification_sweep() {
    let start = Instant::now();
    let lang = target_language();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..10 {
        let g = random_tv_element(&mut rng, 3);
        let rule = PairVeelikeRule::from_element(&g);
        let outcome = rule.verify(&lang, &lang, 8);
        assert!(outcome.is_pass(), "element {i} failed: {outcome:?}");
    }
    finish("06", "10 random pair elements verify at length 8", start, Duration::from_secs(60));
}

#[test]
fn acceptance_07_simulation_and_faithfulness() {
    let start = Instant::now();
    let lang = target_language();
    let alphabet = lang.alphabet().clone();
    let words: Vec<String> = lang.enumerate(6).iter().map(|w| alphabet.format(w)).collect();
    for (name, g) in generators() {
        let rule = VeelikeRule::from_element(&g);
        for w in &words {
            assert_eq!(
                simulate_embedding(&g, w).unwrap(),
                rule.apply(w).unwrap(),
                "generator {name} disagrees at {w:?}"
            );
        }
        // a changed orbit with content of length at most 6
        let map = InducedMap::from_v_element(&g);
        let moved = words.iter().any(|w| {
            let orbit = FlowOrbit::separator_and_word("#", w).unwrap();
            map.apply(&orbit).unwrap().symbol_sequence() != orbit.symbol_sequence()
        });
        assert!(moved, "generator {name} fixes every short orbit");
    }
    finish("07", "embedding simulation and faithfulness", start, Duration::from_secs(30));
}

#[test]
fn acceptance_08_relators_fix_orbits() {
    let start = Instant::now();
    use rand::seq::SliceRandom;
    use rand::Rng;
    let gens = generators();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..50 {
        let conjugated = case % 3 == 2;
        let base_len = if conjugated {
            rng.gen_range(1..=3)
        } else {
            rng.gen_range(1..=4)
        };
        let word: Vec<VElement> = (0..base_len)
            .map(|_| {
                let (_, g) = gens.choose(&mut rng).expect("non-empty");
                if rng.gen::<bool>() {
                    g.clone()
                } else {
                    g.inverse()
                }
            })
            .collect();
        let mut relator: Vec<VElement> = word.clone();
        relator.extend(word.iter().rev().map(VElement::inverse));
        if conjugated {
            let (_, c) = gens.choose(&mut rng).expect("non-empty");
            let mut with_conjugation = vec![c.clone()];
            with_conjugation.extend(relator);
            with_conjugation.push(c.inverse());
            relator = with_conjugation;
        }
        assert!(relator.len() <= 8);

        // precondition: the product reduces to the identity
        let product = relator
            .iter()
            .fold(VElement::identity(), |acc, g| acc.compose(g));
        assert!(product.is_identity(), "case {case} is not a relator");

        let maps: Vec<InducedMap> = relator.iter().map(InducedMap::from_v_element).collect();
        let orbits: Vec<FlowOrbit> = (0..20)
            .map(|_| random_admissible_orbit(&mut rng, 8))
            .collect();
        let check = orbit_fixed_check(&maps, &orbits).unwrap();
        assert!(
            check.is_pass(),
            "case {case}: {:?}",
            check.counterexample
        );
    }
    finish("08", "50 relators fix 20 orbits each", start, Duration::from_secs(120));
}

#[test]
fn acceptance_09_bowen_franks_and_smith_form() {
    let start = Instant::now();
    let entries: Vec<i64> = THREE_MATRIX.iter().flatten().map(|&e| e as i64).collect();
    let a = IntMatrix::from_i64(3, 3, &entries).unwrap();
    let group = bf_group(&a).unwrap();
    assert!(group.is_trivial());
    // cross-check: |det(I - A)| = 1 by the fraction-free determinant,
    // independent of the Smith-form route
    let i_minus_a = IntMatrix::identity(3).sub(&a).unwrap();
    let det = i_minus_a.determinant().unwrap();
    assert_eq!(num_traits::Signed::abs(&det), num_bigint::BigInt::from(1));

    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let entries: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-5..=5)).collect();
        let m = IntMatrix::from_i64(rows, cols, &entries).unwrap();
        let snf = smith_normal_form(&m);
        assert!(snf_invariants_hold(&m, &snf), "SNF invariants failed on {m}");
    }
    finish("09", "Bowen-Franks and 200 Smith forms", start, Duration::from_secs(30));
}

#[test]
fn acceptance_10_markers_and_coded_rewriting() {
    let start = Instant::now();
    let host = Dfa::full_language(Alphabet::binary());
    let markers = find_marker_words(&host, 3, 6).unwrap();
    assert_eq!(markers.len(), 3);
    let len = markers[0].len();
    for w in &markers {
        assert_eq!(w.len(), len);
        assert!(is_unbordered(w).unwrap());
    }
    // concatenation closure: all products of up to 4 blocks are accepted
    let monoid = SyntacticMonoid::of(&host);
    for w in &markers {
        let img = monoid.word_image(w);
        assert!(monoid.is_idempotent(img) && monoid.image_accepts(img));
    }
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let cat = markers[i]
                        .concat(&markers[j])
                        .concat(&markers[k])
                        .concat(&markers[l]);
                    assert!(host.accepts(&cat));
                }
            }
        }
    }

    // coded rewriting reproduces the decoded swap action
    let code = CodedAlphabet::from_search(&host, &["0", "1", "#"], 6).unwrap();
    let map = InducedMap::from_v_element(&VElement::swap());
    let decoded = FlowOrbit::unit(["#", "1"]).unwrap();
    let encoded = code.encode_orbit(&decoded).unwrap();
    let image = map.apply_coded(&code, &encoded).unwrap();
    let expected = code.encode_orbit(&map.apply(&decoded).unwrap()).unwrap();
    assert_eq!(image.symbol_sequence(), expected.symbol_sequence());
    assert_eq!(image.circumference(), encoded.circumference());
    finish("10", "marker search and coded rewriting", start, Duration::from_secs(30));
}

#[test]
fn acceptance_11_derived_values_reproduced() {
    let start = Instant::now();
    // frozen values computed by the brute-force oracle suite (the `oracles`
    // test target of the core crate re-derives each one from first
    // principles); the library must reproduce them exactly
    let lang = target_language();
    let alphabet = lang.alphabet().clone();

    // language machinery
    assert_eq!(lang.minimize().num_states(), 2);
    let enumerated: Vec<String> = lang.enumerate(2).iter().map(|w| alphabet.format(w)).collect();
    assert_eq!(enumerated, vec!["", "1", "01", "11"]);
    assert_eq!(SyntacticMonoid::of(&lang).size(), 3);
    assert!(!lang
        .equivalent(&parse_regex("(0+1)*1", None).unwrap())
        .unwrap());
    let ones = parse_regex("1*", Some(&Alphabet::binary())).unwrap();
    assert!(find_marker_words(&ones, 2, 4).is_err());
    let full = Dfa::full_language(Alphabet::binary());
    let first: Vec<String> = find_marker_words(&full, 1, 4)
        .unwrap()
        .iter()
        .map(|w| alphabet.format(w))
        .collect();
    assert_eq!(first, vec!["0"]);
    assert!(find_marker_words(&full, 3, 6).unwrap()[0].len() == 6);

    // element algebra
    let a = VElement::new([("0", "00"), ("10", "01"), ("11", "1")]).unwrap();
    let aa = a.compose(&a);
    assert_eq!(
        aa.pairs().map(|(d, _)| d.to_string()).collect::<Vec<_>>(),
        vec!["0", "10", "110", "111"]
    );
    assert_eq!(
        a.inverse().pairs().collect::<Vec<_>>(),
        vec![("00", "0"), ("01", "10"), ("1", "11")]
    );
    let rule_a2 = a.local_rule(2).unwrap();
    assert_eq!(rule_a2.image("00"), Some("000"));
    assert_eq!(rule_a2.image("10"), Some("01"));

    // derived rules
    let swap_rule = VeelikeRule::from_element(&VElement::swap());
    assert_eq!(swap_rule.depth(), 2);
    assert_eq!(swap_rule.long_table()["00"], "10");
    assert_eq!(swap_rule.apply("01").unwrap(), "11");
    let a_rule = VeelikeRule::from_element(&a);
    assert_eq!(a_rule.depth(), 3);
    let p = WordPair::new("011", "1");
    assert_eq!(p.alpha(2), WordPair::new("01", "1"));
    assert_eq!(p.omega(2), WordPair::new("1", ""));
    let baker_rule = PairVeelikeRule::from_element(&TwoVElement::baker());
    assert_eq!(
        baker_rule.apply(&WordPair::new("1", "")).unwrap(),
        WordPair::new("", "1")
    );
    assert_eq!(
        baker_rule.apply(&WordPair::new("", "")).unwrap(),
        WordPair::new("", "")
    );

    // shifts
    let ones_hull = veemap::subshift::HullSpec::single(ones, "2")
        .unwrap()
        .vertex_shift()
        .unwrap();
    assert_eq!(
        ones_hull.matrix(),
        vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 1]]
    );
    assert_eq!(six_shift().to_sft().forbidden().len(), 20);
    let bigrams: BTreeSet<_> = six_shift()
        .language(2)
        .into_iter()
        .filter(|w| w.len() == 2)
        .collect();
    assert_eq!(bigrams.len(), 16);

    // integer algebra
    let diag: Vec<i64> = smith_normal_form(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]).unwrap())
        .d
        .diagonal()
        .into_iter()
        .map(|d| i64::try_from(d).unwrap())
        .collect();
    assert_eq!(diag, vec![1, 6]);
    assert!(bf_group(&IntMatrix::from_i64(1, 1, &[2]).unwrap()).unwrap().is_trivial());
    assert!(bf_group(&IntMatrix::from_i64(2, 2, &[1, 1, 1, 1]).unwrap()).unwrap().is_trivial());
    assert_eq!(
        bf_group(&IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]).unwrap())
            .unwrap()
            .to_string(),
        "Z"
    );

    // geometry
    let m = InducedMap::from_v_element(&VElement::swap());
    let o = FlowOrbit::unit(["#", "1"]).unwrap();
    let image = m.apply(&o).unwrap();
    assert_eq!(image.symbols(), vec!["#"]);
    assert_eq!(image.circumference(), o.circumference());
    assert_eq!(simulate_embedding(&VElement::swap(), "1").unwrap(), "");
    let pm = InducedMap::from_tv_element(&TwoVElement::baker());
    let po = FlowOrbit::unit(["1_A", "@", "1_B", "#"]).unwrap();
    assert_eq!(
        pm.apply(&po).unwrap().symbol_sequence(),
        vec!["#", "@", "1_B", "1_B"]
    );
    finish("11", "frozen derived values reproduced", start, Duration::from_secs(30));
}
