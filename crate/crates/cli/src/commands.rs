use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use cutseq_core::coherence::{
    check_coherent, coherent_sequences, coherent_targets, fitting_groups, recognize_direction, renormalize,
    HaltReason,
};
use cutseq_core::generation::{build_family, enumerate_factors, enumerate_factors_direction, generate, periodic_seeds, FamilySeeds};
use cutseq_core::polygon::letter_name;
use cutseq_core::symbolic::{admissible_diagrams, derive, diagram_set, normal_form, square_derive, FactorTrie};
use cutseq_core::tracer::{detect_period, detect_period_exact, plot_svg, sample_start, trace, trace_exact, trace_log, trace_word};
use cutseq_core::{
    Coherence, CoherenceCondition, FareyMap, FiniteWord, ProjectiveDirection, SectorInterval, Sequence, TraceConfig,
    TraceMode,
};

use crate::cli::*;
use crate::{input, CliError};

pub enum Artifact {
    Json(Map<String, Value>),
    Svg(String),
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("commands build objects"),
    }
}

fn letters(w: &[u8], n: usize) -> String {
    let sep = if n <= 4 { "" } else { " " };
    w.iter().map(|&l| letter_name(l as usize, n)).collect::<Vec<_>>().join(sep)
}

fn direction_json(d: &ProjectiveDirection) -> Value {
    json!({ "direction": d.to_string(), "theta": d.theta() })
}

fn interval_json(iv: &SectorInterval) -> Map<String, Value> {
    obj(json!({
        "prefix": iv.prefix,
        "interval_lo": iv.lo_theta(),
        "interval_hi": iv.hi_theta(),
        "interval_lo_exact": iv.lo.is_exact().then(|| iv.lo.to_string()),
        "interval_hi_exact": iv.hi.is_exact().then(|| iv.hi.to_string()),
    }))
}

fn rank(c: CoherenceCondition) -> usize {
    c as usize
}

pub fn run(cmd: &Command, seed: u64) -> Result<Artifact, CliError> {
    match cmd {
        Command::Trace(a) => cmd_trace(a, seed),
        Command::Derive(a) => cmd_derive(a),
        Command::Diagrams(a) => cmd_diagrams(a),
        Command::Recognize(a) => cmd_recognize(a),
        Command::ExpandDirection(a) => cmd_expand(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Seeds(a) => cmd_seeds(a),
        Command::Families(a) => cmd_families(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::CheckCoherence(a) => cmd_coherence(a),
        Command::Complexity(a) => cmd_complexity(a, seed),
        Command::Plot(a) => cmd_plot(a, seed),
    }
}

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Trace(_) => "trace",
        Command::Derive(_) => "derive",
        Command::Diagrams(_) => "diagrams",
        Command::Recognize(_) => "recognize",
        Command::ExpandDirection(_) => "expand-direction",
        Command::Generate(_) => "generate",
        Command::Seeds(_) => "seeds",
        Command::Families(_) => "families",
        Command::Enumerate(_) => "enumerate",
        Command::CheckCoherence(_) => "check-coherence",
        Command::Complexity(_) => "complexity",
        Command::Plot(_) => "plot",
    }
}

struct Traced {
    log: cutseq_core::tracer::TraceLog,
    period: Option<Option<usize>>,
}

fn run_trace(t: &TrajectoryArgs, seed: u64, want_period: bool) -> Result<Traced, CliError> {
    let poly = input::polygon(t.n)?;
    let dir = input::direction(&t.dir, t.n)?;
    let mut cfg = TraceConfig::new(t.crossings);
    cfg.epsilon = t.epsilon;
    if t.exact {
        cfg.mode = TraceMode::Exact;
    }
    let sampled = t.start.is_none();
    let (word, crossings, start, period) = match (&t.start, t.exact) {
        (Some(s), true) => {
            let p = input::exact_point(s)?;
            let (w, c) = trace_exact(&poly, &p, &dir, &cfg)?;
            let period = want_period.then(|| detect_period_exact(&poly, &p, &dir, &cfg)).transpose()?;
            (w, c, p.to_f64(), period)
        }
        _ => {
            let p = match &t.start {
                Some(s) => input::float_point(s)?,
                None => sample_start(&poly, seed),
            };
            let (w, c) = trace(&poly, &p, &dir, &cfg)?;
            let period = want_period.then(|| detect_period(&poly, &p, &dir, &cfg)).transpose()?;
            (w, c, p, period)
        }
    };
    Ok(Traced { log: trace_log(&start, &dir, sampled.then_some(seed), &word, crossings), period })
}

fn cmd_trace(a: &TraceArgs, seed: u64) -> Result<Artifact, CliError> {
    let t = run_trace(&a.traj, seed, a.detect_period)?;
    let mut m = obj(serde_json::to_value(&t.log).expect("trace log serializes"));
    m.insert("n".into(), json!(a.traj.n));
    m.insert("mode".into(), json!(if a.traj.exact { TraceMode::Exact } else { TraceMode::Approx }));
    if a.no_log {
        m.remove("crossings");
    }
    if let Some(p) = t.period {
        m.insert("period".into(), json!(p));
    }
    Ok(Artifact::Json(m))
}

fn cmd_derive(a: &DeriveArgs) -> Result<Artifact, CliError> {
    let n = a.word.n;
    if n == 2 {
        // the square: one letter dropped from every block
        let mut w = input::word(&a.word.word, 2)?;
        for _ in 0..a.times {
            let Sequence::Window(win) = &w else {
                return Err(CliError::Usage("square derivation takes a finite word".into()));
            };
            w = Sequence::window(square_derive(&FiniteWord::new(2, win.letters().to_vec())?)?);
        }
        return Ok(Artifact::Json(obj(json!({ "derived": w.to_string() }))));
    }
    let mut w = input::word(&a.word.word, n)?;
    let mut diagrams = Vec::new();
    for _ in 0..a.times {
        if a.normalize {
            let (v, d) = normal_form(&w, None)?;
            diagrams.push(d);
            w = v;
        }
        w = derive(&w);
    }
    let mut m = obj(json!({ "derived": w.to_string() }));
    if a.normalize {
        m.insert("diagrams".into(), json!(diagrams));
    }
    Ok(Artifact::Json(m))
}

fn cmd_diagrams(a: &DiagramsArgs) -> Result<Artifact, CliError> {
    let set = diagram_set(a.n)?;
    let indices: Vec<usize> = match a.index {
        Some(i) if i < set.len() => vec![i],
        Some(i) => return Err(cutseq_core::Error::IndexOutOfRange { index: i, bound: set.len() }.into()),
        None => (0..set.len()).collect(),
    };
    let diagrams: Vec<Value> = indices
        .iter()
        .map(|&i| {
            let p = set.pi(i);
            json!({
                "index": i,
                "permutation": p.to_string(),
                "map": p.as_slice().iter().map(|&l| letter_name(l, a.n)).collect::<Vec<_>>(),
                "edges": set.diagram(i).edge_names(),
            })
        })
        .collect();
    let mut m = obj(json!({ "n": a.n, "diagrams": diagrams }));
    if a.index.is_none() {
        let boundary: Vec<Value> = (1..set.len())
            .map(|k| json!({ "k": k, "edges": set.boundary(k).edge_names() }))
            .collect();
        m.insert("boundary".into(), json!(boundary));
    }
    if let Some(w) = &a.word {
        m.insert("admissible".into(), json!(admissible_diagrams(&input::word(w, a.n)?)?));
    }
    if a.polygon {
        m.insert("polygon".into(), serde_json::to_value(input::polygon(a.n)?.export()).expect("polygon serializes"));
    }
    Ok(Artifact::Json(m))
}

fn cmd_recognize(a: &RecognizeArgs) -> Result<Artifact, CliError> {
    let n = a.word.n;
    let map = FareyMap::new(n)?;
    match input::word(&a.word.word, n)? {
        Sequence::Window(w) => {
            let iv = recognize_direction(&w, a.depth)?;
            let mut m = interval_json(&iv);
            m.insert("diagrams".into(), json!(iv.prefix));
            m.remove("prefix");
            Ok(Artifact::Json(m))
        }
        w @ Sequence::Periodic(_) => {
            // a periodic word may sit in several sectors; list every coherent sector sequence
            let mut starts = Vec::new();
            for s0 in admissible_diagrams(&w)? {
                let seqs = coherent_sequences(&w, s0, a.depth + 1, a.limit)?;
                let found: Vec<Value> = seqs
                    .iter()
                    .map(|s| -> Result<Value, CliError> {
                        let mut m = interval_json(&map.sector_interval(s)?);
                        m.insert("diagrams".into(), json!(s));
                        m.remove("prefix");
                        Ok(Value::Object(m))
                    })
                    .collect::<Result<_, _>>()?;
                starts.push(json!({ "start": s0, "sequences": found }));
            }
            Ok(Artifact::Json(obj(json!({ "periodic": true, "starts": starts }))))
        }
    }
}

fn cmd_expand(a: &ExpandArgs) -> Result<Artifact, CliError> {
    let map = FareyMap::new(a.n)?;
    let d = input::direction(&a.dir, a.n)?;
    let itinerary = map.itinerary(&d, a.depth)?;
    let iv = map.sector_interval(&itinerary)?;
    let term = map.is_terminating(&d, a.depth)?;
    let mut m = interval_json(&iv);
    m.remove("prefix");
    m.insert("direction".into(), direction_json(&d));
    m.insert("itinerary".into(), json!(itinerary));
    m.insert("terminating".into(), json!(term));
    let e = map.expansion(&d, a.depth)?;
    if e.tail.is_some() {
        let mut forms = vec![e.clone()];
        forms.extend(e.alternate());
        m.insert("expansions".into(), json!(forms));
    }
    Ok(Artifact::Json(m))
}

fn cmd_generate(a: &GenerateArgs) -> Result<Artifact, CliError> {
    let w = input::word(&a.word.word, a.word.n)?;
    let g = generate(a.from, a.to, &w)?;
    Ok(Artifact::Json(obj(json!({ "from": a.from, "to": a.to, "word": g.to_string() }))))
}

fn cmd_seeds(a: &SeedsArgs) -> Result<Artifact, CliError> {
    let seeds: BTreeSet<String> = periodic_seeds(a.k, a.n)?.into_iter().map(|p| format!("per:{p}")).collect();
    Ok(Artifact::Json(obj(json!({ "k": a.k, "seeds": seeds }))))
}

fn cmd_families(a: &FamiliesArgs) -> Result<Artifact, CliError> {
    let prefix = input::usize_list(&a.prefix, "--prefix")?;
    let seeds = if a.seeds == "periodic" {
        FamilySeeds::Periodic
    } else {
        FamilySeeds::Words(a.seeds.split(',').map(|s| input::word(s.trim(), a.n)).collect::<Result<_, _>>()?)
    };
    let words: Vec<String> = build_family(&prefix, a.n, &seeds)?.iter().map(|w| w.to_string()).collect();
    Ok(Artifact::Json(obj(json!({ "prefix": prefix, "words": words }))))
}

fn cmd_enumerate(a: &EnumerateArgs) -> Result<Artifact, CliError> {
    let e = match &a.prefix {
        Some(p) => enumerate_factors(&input::usize_list(p, "--prefix")?, a.n, a.len, a.depth, a.max_letters)?,
        None => {
            let d = input::direction(&a.dir, a.n)?;
            enumerate_factors_direction(&d, a.n, a.len, a.depth, a.max_depth, a.max_letters)?
        }
    };
    let factors: Vec<String> = e.factors.iter().map(|f| letters(f, a.n)).collect();
    Ok(Artifact::Json(obj(json!({
        "prefix": e.prefix,
        "depth": e.depth,
        "counts_by_depth": e.counts_by_depth,
        "len": a.len,
        "count": factors.len(),
        "factors": factors,
    }))))
}

/// Best outcome over all targets `j`: accept if any does, otherwise the
/// rejection that got furthest through the conditions.
fn best_target(w: &Sequence, i: usize, diagrams: usize) -> Result<(Coherence, Vec<usize>), CliError> {
    let targets = coherent_targets(w, i)?;
    if !targets.is_empty() {
        return Ok((Coherence::Accept, targets));
    }
    let mut best = CoherenceCondition::C0;
    for j in 1..diagrams {
        if let Coherence::Reject(c) = check_coherent(w, i, j)? {
            if rank(c) > rank(best) {
                best = c;
            }
        }
    }
    Ok((Coherence::Reject(best), targets))
}

fn verdict(c: Coherence) -> Map<String, Value> {
    obj(serde_json::to_value(c).expect("verdict serializes"))
}

fn cmd_coherence(a: &CoherenceArgs) -> Result<Artifact, CliError> {
    let n = a.word.n;
    let w = input::word(&a.word.word, n)?;
    let count = diagram_set(n)?.len();
    if let Some(p) = &a.pair {
        let ij = input::usize_list(p, "--pair")?;
        let [i, j] = ij[..] else {
            return Err(CliError::Usage("--pair expects \"i,j\"".into()));
        };
        let mut m = verdict(check_coherent(&w, i, j)?);
        m.insert("i".into(), json!(i));
        m.insert("j".into(), json!(j));
        if i < count {
            m.insert("fitting_groups".into(), json!(fitting_groups(&w, i)?));
        }
        return Ok(Artifact::Json(m));
    }
    if w.is_periodic() {
        let mut starts = Vec::new();
        let mut overall: Option<Coherence> = None;
        let candidates = match a.start {
            Some(s) => vec![s],
            None => admissible_diagrams(&w)?,
        };
        for s0 in candidates {
            let (c, targets) = best_target(&w, s0, count)?;
            let mut m = verdict(c);
            m.insert("start".into(), json!(s0));
            m.insert("targets".into(), json!(targets));
            if c.is_accept() {
                m.insert("sequences".into(), json!(coherent_sequences(&w, s0, a.depth + 1, 16)?));
            }
            overall = Some(match (overall, c) {
                (Some(Coherence::Accept), _) | (_, Coherence::Accept) => Coherence::Accept,
                (Some(Coherence::Reject(x)), Coherence::Reject(y)) if rank(x) > rank(y) => Coherence::Reject(x),
                _ => c,
            });
            starts.push(Value::Object(m));
        }
        let mut m = verdict(overall.unwrap_or(Coherence::Reject(CoherenceCondition::C0)));
        m.insert("starts".into(), json!(starts));
        return Ok(Artifact::Json(m));
    }
    let t = renormalize(&w, a.depth + 1, a.start)?;
    let mut levels = Vec::new();
    let mut overall = json!({ "verdict": "accept" });
    for k in 0..a.depth.min(t.steps.len()) {
        let step = &t.steps[k];
        let i = step.diagram;
        let (c, j) = match t.steps.get(k + 1) {
            Some(next) => (check_coherent(&step.word, i, next.diagram)?, Some(next.diagram)),
            None => (best_target(&step.word, i, count)?.0, None),
        };
        let mut m = verdict(c);
        m.insert("level".into(), json!(k));
        m.insert("i".into(), json!(i));
        m.insert("j".into(), json!(j));
        levels.push(Value::Object(m));
        if !c.is_accept() {
            overall = json!(c);
            overall["level"] = json!(k);
            break;
        }
        if j.is_none() {
            // coherent here, but the window gives out before the next diagram is known
            overall = json!({ "verdict": "undetermined", "level": k });
            break;
        }
    }
    if t.steps.is_empty() && a.depth > 0 {
        overall = match t.halt {
            Some(HaltReason::Inadmissible | HaltReason::StartRejected { .. }) => json!(Coherence::Reject(CoherenceCondition::C0)),
            _ => json!({ "verdict": "undetermined" }),
        };
        overall["level"] = json!(0);
    }
    let mut m = obj(overall);
    m.insert("diagrams".into(), json!(t.diagrams()));
    m.insert("halt".into(), json!(t.halt));
    m.insert("levels".into(), json!(levels));
    Ok(Artifact::Json(m))
}

fn cmd_complexity(a: &ComplexityArgs, seed: u64) -> Result<Artifact, CliError> {
    if a.len == 0 || a.starts == 0 {
        return Err(CliError::Usage("--len and --starts must be positive".into()));
    }
    let poly = input::polygon(a.n)?;
    let theta = input::direction(&a.dir, a.n)?.theta();
    let words: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..a.starts as u64)
            .map(|k| {
                let poly = &poly;
                s.spawn(move || trace_word(poly, &sample_start(poly, seed.wrapping_add(k)), theta, a.crossings))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("trace thread panicked")).collect()
    });
    let mut trie = FactorTrie::new(a.n, a.len);
    for w in words {
        trie.insert_word(w?.letters());
    }
    let counts: Vec<usize> = (1..=a.len).map(|l| trie.count(l)).collect();
    let expected: Vec<usize> = (1..=a.len).map(|l| (a.n - 1) * l + 1).collect();
    Ok(Artifact::Json(obj(json!({
        "theta": theta,
        "crossings": a.crossings,
        "starts": a.starts,
        "counts": counts,
        "expected": expected,
        "matches": counts == expected,
    }))))
}

fn cmd_plot(a: &PlotArgs, seed: u64) -> Result<Artifact, CliError> {
    let t = run_trace(&a.traj, seed, false)?;
    Ok(Artifact::Svg(plot_svg(&t.log, &input::polygon(a.traj.n)?)?))
}
