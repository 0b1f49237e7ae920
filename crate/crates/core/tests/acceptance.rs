//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits non-zero when a criterion fails, unless the failure is listed in
//! `KNOWN_RED` together with its cause.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::{random_cycle, random_window, seq};
use cutseq_core::coherence::{check_coherent, decompose_generation, renormalize, Coherence, CoherenceCondition};
use cutseq_core::exact_arith::moebius_apply;
use cutseq_core::farey::{square_coordinate, square_farey, square_farey_exact};
use cutseq_core::generation::{build_family, generate, periodic_seeds, FamilySeeds};
use cutseq_core::polygon::{induced_permutation, isometry_nu, veech_elements};
use cutseq_core::symbolic::{derive, diagram_set, permute, square_derive, DiagramIndex, FactorTrie};
use cutseq_core::tracer::{detect_period, detect_period_exact, sample_start_rng, trace_word};
use cutseq_core::{
    build_polygon, Expansion, FareyMap, FiniteWord, Mat2, Point, ProjectiveDirection, Sequence, TraceConfig, Q2,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Criteria whose failure is caused by the source data rather than the code.
const KNOWN_RED: &[usize] = &[1];

const WORKED_WINDOW: &str = "AADBDAAAABDBCBDBDAAAADBDAAAADBDAAAADBDBCBDBDAAADBDBDAAADB";
/// The same window with the `D` restored between `A` and `B`.
const WORKED_WINDOW_FIXED: &str = "AADBDAAAADBDBCBDBDAAAADBDAAAADBDAAAADBDBCBDBDAAADBDBDAAADB";
const WORKED_STRINGS: [&str; 4] = [
    "CCBDBCCCCDBDADBDBCCCCBDBCCCCBDBCCCCBDBDADBDBCCCBDBDBCCCBD",
    "DCCDBABDCCDCCDCCDBABDCDBDC",
    "BCCBDADBCCBCCBCCBDADBCBDBC",
    "ABBACD",
];

fn chain(window: &str) -> Result<(Vec<usize>, Vec<String>), String> {
    let t = renormalize(&seq(window), 3, None).map_err(|e| e.to_string())?;
    if let Some(h) = &t.halt {
        return Err(format!("halted after {:?}: {h:?}", t.diagrams()));
    }
    let s = &t.steps;
    Ok((t.diagrams(), vec![s[0].normalized.to_string(), s[1].word.to_string(), s[1].normalized.to_string(), s[2].word.to_string()]))
}

fn c1_worked_chain() -> Outcome {
    let fixed = match chain(WORKED_WINDOW_FIXED) {
        Ok((d, strs)) => {
            let same: Vec<bool> = strs.iter().zip(WORKED_STRINGS).map(|(a, b)| a == b).collect();
            format!("restored window gives d = {d:?}, string matches {same:?} (the first expected normalized string has the same gap)")
        }
        Err(e) => format!("restored window: {e}"),
    };
    match chain(WORKED_WINDOW) {
        Ok((d, strs)) if d == [4, 7, 2] && strs.iter().zip(WORKED_STRINGS).all(|(a, b)| a == b) => {
            Ok(format!("d = {d:?}"))
        }
        Ok((d, _)) => Err(format!("d = {d:?}; {fixed}")),
        Err(e) => Err(format!("literal window {e}: transition AB at index 8 is in no diagram; {fixed}")),
    }
}

fn c2_generation_example() -> Outcome {
    let g = generate(3, 0, &seq("CDBAABDBD")).map_err(|e| e.to_string())?;
    let want = "CBDBCCBCCBDADBCCBDADBCCBCCBDBCCBCCBD";
    if g.to_string() == want {
        Ok(format!("{} letters", g.len()))
    } else {
        Err(format!("got {g}"))
    }
}

fn c3_families() -> Outcome {
    let canon = |v: &[&str]| -> Vec<String> {
        let mut out: Vec<String> = v.iter().map(|s| seq(&format!("per:{s}")).to_string()).collect();
        out.sort();
        out
    };
    let fam = |p: &[usize]| -> Vec<String> {
        let mut out: Vec<String> =
            build_family(p, 4, &FamilySeeds::Periodic).unwrap().iter().map(|s| s.to_string()).collect();
        out.sort();
        out
    };
    let seeds: Vec<String> = {
        let mut v: Vec<String> = periodic_seeds(6, 4).unwrap().into_iter().map(|p| Sequence::Periodic(p).to_string()).collect();
        v.sort();
        v
    };
    let checks = [
        ("P_6", seeds, canon(&["BA", "AC", "CD", "D"])),
        ("P(0,6)", fam(&[0, 6]), canon(&["BDAD", "ADBCCCBD", "CCBDBC", "DBCCB"])),
        ("P(1,6)", fam(&[1, 6]), canon(&["CADA", "DACBBBCA", "BBCACB", "ACBBC"])),
        ("P(0,1,6)", fam(&[0, 1, 6]), canon(&["CBDADADB", "DADBCBCCBCCBCBDA", "BCCBCBDADBCBCC", "ADBCBCCBCBD"])),
    ];
    for (name, got, want) in &checks {
        if got != want {
            return Err(format!("{name}: got {got:?}"));
        }
    }
    Ok("4 sets equal".into())
}

fn c4_inversion(rng: &mut ChaCha8Rng) -> Outcome {
    let set = diagram_set(4).unwrap();
    let mut failures = 0;
    for k in 1..8 {
        for _ in 0..1000 {
            let len = rng.gen_range(1..40);
            let w = random_cycle(set.diagram(k), len, rng);
            let g = generate(k, 0, &w).map_err(|e| e.to_string())?;
            if derive(&g) != w {
                failures += 1;
            }
        }
    }
    if failures == 0 {
        Ok("7000 periodic words".into())
    } else {
        Err(format!("{failures} failures"))
    }
}

fn c5_derived_language(rng: &mut ChaCha8Rng) -> Outcome {
    let poly = build_polygon(4).unwrap();
    let map = FareyMap::new(4).unwrap();
    let set = diagram_set(4).unwrap();
    let mut checked = 0;
    for _ in 0..20 {
        let theta = rng.gen_range(0.01..PI - 0.01);
        let (img, s0) = map.apply(&ProjectiveDirection::approx(theta).unwrap()).map_err(|e| e.to_string())?;
        let w = trace_word(&poly, &sample_start_rng(&poly, rng), theta, 100_000).map_err(|e| e.to_string())?;
        let derived = derive(&permute(set.pi(s0), &Sequence::window(w)));
        let other = trace_word(&poly, &sample_start_rng(&poly, rng), img.theta(), 1_000_000).map_err(|e| e.to_string())?;
        let mut trie = FactorTrie::new(4, 30);
        trie.insert_word(other.letters());
        let d = derived.letters();
        for len in 1..=30 {
            for f in d.windows(len) {
                checked += 1;
                if !trie.contains(f) {
                    return Err(format!("theta = {theta}: factor {} missing", FiniteWord::new(4, f.to_vec()).unwrap()));
                }
            }
        }
    }
    Ok(format!("{checked} factor occurrences found"))
}

fn c6_itineraries(rng: &mut ChaCha8Rng) -> Outcome {
    let poly = build_polygon(4).unwrap();
    let map = FareyMap::new(4).unwrap();
    let depth = 6;
    let mut longest = 0;
    for _ in 0..100 {
        let theta = rng.gen_range(0.0..PI);
        let start = sample_start_rng(&poly, rng);
        let it = map.itinerary(&ProjectiveDirection::approx(theta).unwrap(), depth).map_err(|e| e.to_string())?;
        let mut len = 10_000;
        loop {
            let w = trace_word(&poly, &start, theta, len).map_err(|e| e.to_string())?;
            let t = renormalize(&Sequence::window(w), depth, None).map_err(|e| e.to_string())?;
            if t.halt.is_none() {
                if t.diagrams() != it {
                    return Err(format!("theta = {theta}: diagrams {:?}, itinerary {it:?}", t.diagrams()));
                }
                break;
            }
            if len >= 10_000_000 {
                return Err(format!("theta = {theta}: {:?} after {len} crossings", t.halt));
            }
            len *= 4;
        }
        longest = longest.max(len);
    }
    Ok(format!("100 directions, {depth} diagrams each, longest window {longest}"))
}

fn c7_complexity(rng: &mut ChaCha8Rng) -> Outcome {
    for (n, max_len) in [(4usize, 40usize), (6, 20)] {
        let poly = build_polygon(n).unwrap();
        for _ in 0..5 {
            let theta = rng.gen_range(0.05..PI - 0.05);
            let w = trace_word(&poly, &sample_start_rng(&poly, rng), theta, 1_000_000).map_err(|e| e.to_string())?;
            let mut trie = FactorTrie::new(n, max_len);
            trie.insert_word(w.letters());
            for len in 1..=max_len {
                if trie.count(len) != (n - 1) * len + 1 {
                    return Err(format!("n = {n}, theta = {theta}: {} factors of length {len}", trie.count(len)));
                }
            }
        }
    }
    Ok("3l+1 up to 40 and 5l+1 up to 20".into())
}

fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-6i64..=6)), BigInt::from(rng.gen_range(1i64..=4)))
}

fn c8_terminating(rng: &mut ChaCha8Rng) -> Outcome {
    let poly = build_polygon(4).unwrap();
    let map = FareyMap::new(4).unwrap();
    let bound = 100_000;
    let depth = 60;
    let mut max_period = 0;
    let mut max_depth = 0;
    for _ in 0..20 {
        let cot = Q2::new(small_rational(rng), small_rational(rng));
        let d = ProjectiveDirection::from_cot(cot.clone());
        let term = map.is_terminating(&d, depth).map_err(|e| e.to_string())?;
        let cutseq_core::Termination::Terminating { depth: reached, .. } = term else {
            return Err(format!("cot = {cot}: no 1/7 tail within {depth}"));
        };
        max_depth = max_depth.max(reached);
        let period = (0..20)
            .find_map(|_| {
                let x = BigRational::new(BigInt::from(rng.gen_range(-40i64..=40)), BigInt::from(101));
                let y = BigRational::new(BigInt::from(rng.gen_range(-40i64..=40)), BigInt::from(103));
                let start = Point::new(Q2::rational(x), Q2::rational(y));
                detect_period_exact(&poly, &start, &d, &TraceConfig::exact(bound)).ok().flatten()
            })
            .ok_or_else(|| format!("cot = {cot}: no period within {bound}"))?;
        max_period = max_period.max(period);
    }
    for _ in 0..20 {
        let theta = rng.gen_range(0.01..PI - 0.01);
        let d = ProjectiveDirection::approx(theta).unwrap();
        if map.is_terminating(&d, depth).map_err(|e| e.to_string())?.is_terminating() {
            return Err(format!("theta = {theta} reported terminating"));
        }
        let start = sample_start_rng(&poly, rng);
        if let Some(p) = detect_period(&poly, &start, &d, &TraceConfig::new(bound)).map_err(|e| e.to_string())? {
            return Err(format!("theta = {theta}: period {p}"));
        }
    }
    Ok(format!("exact: longest period {max_period}, deepest tail start {max_depth}; generic: none"))
}

fn c9_coherence(rng: &mut ChaCha8Rng) -> Outcome {
    let bad = seq("per:CCCBDBCCBDBCCBDBCBDADB");
    for j in 1..8 {
        let c = check_coherent(&bad, 0, j).map_err(|e| e.to_string())?;
        if c != Coherence::Reject(CoherenceCondition::C1) {
            return Err(format!("incoherent word with j = {j}: {c:?}"));
        }
    }
    let poly = build_polygon(4).unwrap();
    let map = FareyMap::new(4).unwrap();
    let set = diagram_set(4).unwrap();
    let mut agree = 0;
    let check_agreement = |w: &Sequence, i: usize| -> Result<usize, String> {
        let dec = decompose_generation(w, i).ok().map(|d| d.diagrams).unwrap_or_default();
        for j in 1..8 {
            let a = check_coherent(w, i, j).map_err(|e| e.to_string())?.is_accept();
            if a != dec.contains(&j) {
                return Err(format!("checks disagree on {w} at ({i}, {j})"));
            }
        }
        Ok(7)
    };
    for _ in 0..50 {
        let theta = rng.gen_range(0.0..PI);
        let it = map.itinerary(&ProjectiveDirection::approx(theta).unwrap(), 4).map_err(|e| e.to_string())?;
        let mut w = Sequence::window(trace_word(&poly, &sample_start_rng(&poly, rng), theta, 200_000).map_err(|e| e.to_string())?);
        for k in 0..3 {
            let c = check_coherent(&w, it[k], it[k + 1]).map_err(|e| e.to_string())?;
            if !c.is_accept() {
                return Err(format!("theta = {theta}, level {k}: {c:?} for ({}, {})", it[k], it[k + 1]));
            }
            agree += check_agreement(&w, it[k])?;
            w = derive(&permute(set.pi(it[k]), &w));
        }
    }
    // rejected cases: generated words with one letter changed
    let mut rejected = 0;
    for _ in 0..1000 {
        let k = rng.gen_range(1..8);
        let i = rng.gen_range(0..8);
        let v = random_window(set.diagram(k), rng.gen_range(3..12), rng);
        let g = generate(k, i, &v).map_err(|e| e.to_string())?;
        let mut letters = g.letters().to_vec();
        let p = rng.gen_range(0..letters.len());
        letters[p] = rng.gen_range(0..4);
        let m = Sequence::window(FiniteWord::new(4, letters).unwrap());
        if !set.diagram(i).contains_table(&m.transition_table()) {
            continue;
        }
        if !(1..8).any(|j| check_coherent(&m, i, j).unwrap().is_accept()) {
            rejected += 1;
        }
        agree += check_agreement(&m, i)?;
    }
    Ok(format!("C1 rejection, 150 traced levels accepted, {agree} agreeing pairs ({rejected} incoherent mutants)"))
}

fn c10_two_expansions(rng: &mut ChaCha8Rng) -> Outcome {
    let map = FareyMap::new(4).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let len = rng.gen_range(1..6);
        let mut first: Vec<usize> = (0..len).map(|j| if j == 0 { rng.gen_range(0..8) } else { rng.gen_range(1..8) }).collect();
        let (last, tail) = if rng.gen_bool(0.5) {
            ([3, 5, 7][rng.gen_range(0..3)], 1)
        } else {
            ([2, 4, 6][rng.gen_range(0..3)], 7)
        };
        first.push(last);
        let mut second = first.clone();
        *second.last_mut().unwrap() -= 1;
        let a = map.direction_from_expansion(&Expansion::new(4, first.clone(), Some(tail)), 0).map_err(|e| e.to_string())?;
        let b = map.direction_from_expansion(&Expansion::new(4, second.clone(), Some(tail)), 0).map_err(|e| e.to_string())?;
        if a.lo != b.lo {
            return Err(format!("{first:?}/{second:?} + {tail}: limits {} and {}", a.lo, b.lo));
        }
        // truncations at depth 60 both contain the common limit
        let pad = |p: &[usize]| -> Vec<usize> { p.iter().copied().chain(std::iter::repeat(tail)).take(60).collect() };
        let ia = map.sector_interval(&pad(&first)).map_err(|e| e.to_string())?;
        let ib = map.sector_interval(&pad(&second)).map_err(|e| e.to_string())?;
        for iv in [&ia, &ib] {
            if !iv.contains(&a.lo) {
                return Err(format!("{first:?} + {tail}: depth-60 interval misses the limit"));
            }
            worst = worst.max(iv.width());
        }
        let it = map.itinerary(&a.lo, 60).map_err(|e| e.to_string())?;
        if it != pad(&first) {
            return Err(format!("itinerary {:?} does not start with {first:?} + {tail}", &it[..first.len() + 2]));
        }
    }
    Ok(format!("50 pairs with equal exact limits; widest depth-60 cylinder {worst:.1e}"))
}

fn c11_square() -> Outcome {
    let half = BigRational::new(1.into(), 2.into());
    if square_farey_exact(&half).map_err(|e| e.to_string())? != BigRational::from_integer(1.into()) {
        return Err("F(1/2) != 1".into());
    }
    if (square_farey(0.5).unwrap() - 1.0).abs() > 1e-15 || (square_coordinate(PI / 4.0) - 0.5).abs() > 1e-15 {
        return Err("floating square Farey values".into());
    }
    let w = FiniteWord::parse("ABBBABBBBABBBABBBABBBBA", 2).unwrap();
    let d = square_derive(&w).map_err(|e| e.to_string())?;
    if d.to_string() != "ABBABBBABBABBABBBA" {
        return Err(format!("derived {d}"));
    }
    Ok("F(1/2) = 1, t(pi/4) = 1/2, derived pair".into())
}

fn c12_veech() -> Outcome {
    let (sigma, gamma) = veech_elements(4).unwrap();
    let (s, g) = (sigma.exact.unwrap(), gamma.exact.unwrap());
    if g.product(&g) != Mat2::<Q2>::identity() {
        return Err("gamma^2 != Id".into());
    }
    if g.product(&isometry_nu(7, 4).unwrap().exact.unwrap()) != s {
        return Err("gamma nu_7 != sigma".into());
    }
    let list = ["id", "(AD)(BC)", "(ABCD)", "(AC)", "(AC)(BD)", "(AB)(CD)", "(ADCB)", "(BD)"];
    let set = diagram_set(4).unwrap();
    for (i, want) in list.iter().enumerate() {
        let p = induced_permutation(i, 4).unwrap();
        if p.to_string() != *want {
            return Err(format!("pi_{i} = {p}"));
        }
        if set.diagram(i).relabel(&p, DiagramIndex::Sector(0)).edges() != set.diagram(0).edges() {
            return Err(format!("pi_{i} D_{i} != D_0"));
        }
    }
    // γ fixes π/8 exactly
    let eighth = ProjectiveDirection::multiple_of_pi(1, 8).unwrap();
    if moebius_apply(&g, &eighth).unwrap() != eighth {
        return Err("gamma moves pi/8".into());
    }
    Ok("all exact".into())
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>)> = vec![
        ("renormalization chain of the worked window", Box::new(|_| c1_worked_chain())),
        ("generation of CDBAABDBD from diagram 3", Box::new(|_| c2_generation_example())),
        ("periodic seed families along 0,1,6", Box::new(|_| c3_families())),
        ("derivation inverts generation", Box::new(c4_inversion)),
        ("derived words live in the image direction", Box::new(c5_derived_language)),
        ("diagram sequences equal Farey itineraries", Box::new(c6_itineraries)),
        ("factor complexity (n-1)l+1", Box::new(c7_complexity)),
        ("terminating directions are periodic", Box::new(c8_terminating)),
        ("coherence checks", Box::new(c9_coherence)),
        ("two expansions of terminating directions", Box::new(c10_two_expansions)),
        ("square Farey map and derivation", Box::new(|_| c11_square())),
        ("exact Veech group data", Box::new(|_| c12_veech())),
    ];
    let mut unexpected = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        let id = k + 1;
        let t = Instant::now();
        let outcome = run(&mut rng);
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name} ({detail}) [{secs:.1}s]"),
            Err(detail) => {
                println!("FAIL {id:>2} {name}: {detail} [{secs:.1}s]");
                if !KNOWN_RED.contains(&id) {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
