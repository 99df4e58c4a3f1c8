//! Subcommand implementations. Each returns the text to print and an exit
//! code; nothing here touches stdout directly.

use std::cmp::Ordering;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;
use traintrack::graph::{Graph, Path, Turn};
use traintrack::interval::{parse_rational, rat, Interval, Precision};
use traintrack::map::{
    homotopy_equivalence, is_expanding, is_train_track, GraphMap, TrainTrackVerdict,
};
use traintrack::measure::{
    frequency_oracle, verify_eigen_measure, verify_kolmogorov, CheckReport, KolmogorovFunction,
    Measure,
};
use traintrack::spectra::{block_form, distinguished_eigenvectors, BlockKind};
use traintrack::substitution::{ergodic_measures, Substitution};
use traintrack::tower::{
    map_repetition_bound, mat_vec, repetition_bound, RepetitionMode, RepetitionOutcome,
    StationaryTower, VectorTower,
};

use crate::parse::{self, InputDocument, ParseError};

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => EXIT_PARSE,
            CliError::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

fn pre(e: impl std::fmt::Display) -> CliError {
    CliError::Precondition(e.to_string())
}

/// Output of a successful run; `code` is nonzero only for failed checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub out: String,
    pub code: i32,
}

impl Outcome {
    fn ok(out: String) -> Outcome {
        Outcome { out, code: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Normalize {
    /// Smallest positive coordinate becomes one.
    Min,
    /// Coordinates sum to one.
    Sum,
    /// Keep the vector as given (auto vectors come sum-normalized).
    None,
}

pub fn load(path: &str) -> Result<InputDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    parse::parse(&text).map_err(|source| CliError::Parse {
        path: path.to_string(),
        source,
    })
}

fn get_map<'a>(doc: &'a InputDocument, name: &str) -> Result<&'a GraphMap, CliError> {
    doc.map(name)
        .map(|m| &m.map)
        .ok_or_else(|| CliError::Usage(format!("no map named `{name}`")))
}

fn dec(x: &Interval, digits: usize) -> String {
    x.to_decimal(digits)
}

fn exact(x: &Interval) -> String {
    if x.is_exact() {
        x.lo().to_string()
    } else {
        format!("[{}, {}]", x.lo(), x.hi())
    }
}

fn turn_string(g: &Graph, t: Turn) -> String {
    format!(
        "{{{}, {}}}",
        g.edge_token(t.first()),
        g.edge_token(t.second())
    )
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub struct CheckArgs {
    pub rep_cap: usize,
    pub rep_level: u32,
    pub format: Format,
}

pub fn check(doc: &InputDocument, map: &str, args: &CheckArgs) -> Result<Outcome, CliError> {
    let f = get_map(doc, map)?;
    let g = f.domain();
    if !f.is_self_map() {
        return Err(pre(format!("`{map}` is not a self-map")));
    }
    let verdict = is_train_track(f).map_err(pre)?;
    let expanding = is_expanding(f).map_err(pre)?;
    let he = homotopy_equivalence(f).map_err(pre)?;
    let tt = matches!(verdict, TrainTrackVerdict::TrainTrack);
    let witness = match &verdict {
        TrainTrackVerdict::TrainTrack => None,
        TrainTrackVerdict::NotTrainTrack {
            edge,
            iterate,
            turn,
        } => {
            let mut p: Path = vec![*edge];
            for _ in 0..*iterate {
                p = f.image_of_path(&p);
            }
            Some((*edge, *iterate, *turn, p))
        }
    };
    let tower = if tt && expanding {
        StationaryTower::new(f).ok()
    } else {
        None
    };
    let (rep, rep_scope) = match &tower {
        Some(t) => (
            repetition_bound(
                t,
                args.rep_level,
                args.rep_cap,
                RepetitionMode::InfinitelyLegal,
            )
            .map_err(pre)?,
            format!("tower level {}", args.rep_level),
        ),
        None => (map_repetition_bound(f, args.rep_cap), "map".to_string()),
    };
    let rep_text = match &rep {
        RepetitionOutcome::Found(r) => r.to_string(),
        RepetitionOutcome::NotFoundWithinCap { cap, .. } => format!("none within cap {cap}"),
    };
    let out = match args.format {
        Format::Json => {
            let w = witness.as_ref().map(|(e, t, turn, p)| {
                json!({
                    "edge": g.edge_token(*e),
                    "iterate": t,
                    "turn": [g.edge_token(turn.first()), g.edge_token(turn.second())],
                    "image": g.path_string(p),
                })
            });
            let v = json!({
                "schema": 1,
                "map": map,
                "train_track": tt,
                "witness": w,
                "expanding": expanding,
                "homotopy_equivalence": he.is_equivalence,
                "abelian_det": he.abelian_det.to_string(),
                "repetition_bound": rep.found(),
                "repetition_scope": rep_scope,
                "repetition_cap": args.rep_cap,
            });
            pretty(&v)
        }
        _ => {
            let mut s = format!("map {map}\n");
            s += &format!("train track: {}\n", yes(tt));
            if let Some((e, t, turn, p)) = &witness {
                s += &format!(
                    "  witness: f^{t}({}) = {} is not reduced (turn {})\n",
                    g.edge_token(*e),
                    g.path_string(p),
                    turn_string(g, *turn)
                );
            }
            s += &format!("expanding: {}\n", yes(expanding));
            s += &format!(
                "homotopy equivalence: {} (abelian determinant {})\n",
                yes(he.is_equivalence),
                he.abelian_det
            );
            s += &format!("repetition bound ({rep_scope}): {rep_text}\n");
            s
        }
    };
    Ok(Outcome::ok(out))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn kind_name(k: BlockKind) -> String {
    match k {
        BlockKind::Primitive => "primitive".into(),
        BlockKind::Zero => "zero".into(),
        BlockKind::Imprimitive { period } => format!("imprimitive/{period}"),
    }
}

pub fn spectrum(doc: &InputDocument, map: &str, digits: usize) -> Result<Outcome, CliError> {
    let f = get_map(doc, map)?;
    if !f.is_self_map() {
        return Err(pre(format!("`{map}` is not a self-map")));
    }
    let g = f.domain();
    let m = f.transition_matrix();
    let prec = Precision::from_env();
    let form = block_form(&m).map_err(pre)?;
    let names = |ix: &[usize]| {
        ix.iter()
            .map(|&i| g.edge_name(i).to_string())
            .collect::<Vec<_>>()
    };
    let blocks: Vec<Value> = form
        .blocks
        .iter()
        .map(|b| {
            json!({
                "edges": names(&b.indices),
                "kind": kind_name(b.kind),
                "radius": b.radius.as_ref().map(|r| dec(&r.refined(prec), digits)),
            })
        })
        .collect();
    let dist: Vec<Value> = distinguished_eigenvectors(&m, prec)
        .map_err(pre)?
        .iter()
        .map(|ep| {
            json!({
                "block": ep.block,
                "lambda": dec(&ep.lambda_enclosure, digits),
                "vector": ep.vector.iter().map(|x| dec(x, digits)).collect::<Vec<_>>(),
                "support": names(&ep.support()),
            })
        })
        .collect();
    let v = json!({
        "schema": 1,
        "map": map,
        "edges": g.edge_names(),
        "matrix": m.to_rows(),
        "power_used": form.power_used,
        "blocks": blocks,
        "distinguished": dist,
    });
    Ok(Outcome::ok(pretty(&v)))
}

/// How the eigenvector is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VectorSpec {
    /// Distinguished eigenvector with the largest eigenvalue.
    Auto,
    Explicit(Vec<String>),
}

impl std::str::FromStr for VectorSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            Ok(VectorSpec::Auto)
        } else {
            Ok(VectorSpec::Explicit(
                s.split(',').map(|x| x.trim().to_string()).collect(),
            ))
        }
    }
}

fn choose_vector(
    f: &GraphMap,
    choice: &VectorSpec,
    norm: Normalize,
    prec: Precision,
) -> Result<VectorTower, CliError> {
    let m = f.transition_matrix();
    let vt = match choice {
        VectorSpec::Auto => {
            let mut pairs: Vec<_> = distinguished_eigenvectors(&m, prec)
                .map_err(pre)?
                .into_iter()
                .filter(|ep| ep.lambda.cmp_rational(&rat(1, 1)) == Ordering::Greater)
                .collect();
            pairs.sort_by(|a, b| b.lambda.to_f64().total_cmp(&a.lambda.to_f64()));
            match pairs.as_slice() {
                [] => return Err(pre("no distinguished eigenvector with eigenvalue > 1")),
                [a, b, ..] if (a.lambda.to_f64() - b.lambda.to_f64()).abs() < 1e-9 => {
                    return Err(pre("several distinguished eigenvectors share the top eigenvalue; pass --vector explicitly"))
                }
                [a, ..] => VectorTower::from_eigenpair(a),
            }
        }
        VectorSpec::Explicit(parts) => explicit_vector(&m, parts, prec)?,
    };
    let vt = match norm {
        Normalize::None => vt,
        Normalize::Sum => vt.scaled(&vt.sum().recip().ok_or_else(|| pre("vector sums to zero"))?),
        Normalize::Min => {
            let i = (0..vt.v.len())
                .filter(|&i| vt.v[i].is_positive())
                .min_by(|&i, &j| vt.v[i].to_f64().total_cmp(&vt.v[j].to_f64()))
                .ok_or_else(|| pre("vector has no positive coordinate"))?;
            vt.normalized_at(i).expect("positive coordinate")
        }
    };
    Ok(vt)
}

fn explicit_vector(
    m: &traintrack::matrix::IntMatrix,
    parts: &[String],
    prec: Precision,
) -> Result<VectorTower, CliError> {
    if parts.len() != m.rows() {
        return Err(CliError::Usage(format!(
            "--vector needs {} comma-separated entries, got {}",
            m.rows(),
            parts.len()
        )));
    }
    let v: Vec<Interval> = parts
        .iter()
        .map(|p| {
            parse_rational(p)
                .map(Interval::exact)
                .ok_or_else(|| CliError::Usage(format!("bad vector entry `{p}`")))
        })
        .collect::<Result<_, _>>()?;
    if v.iter().any(|x| x.is_negative()) {
        return Err(pre("vector has a negative entry"));
    }
    let mv = mat_vec(m, &v, prec.bits);
    let sum_v: Interval = v.iter().cloned().sum();
    let sum_mv: Interval = mv.iter().cloned().sum();
    let lambda = sum_mv
        .checked_div(&sum_v)
        .ok_or_else(|| pre("vector sums to zero"))?;
    let scale = v.iter().map(|x| x.to_f64()).fold(0.0, f64::max);
    let tol = parse_rational(&format!("{:e}", 1e-9 * scale.max(1.0))).expect("formatted float");
    for (a, b) in mv.iter().zip(&v) {
        if (a - &(&lambda * b)).within(&tol) != Some(true) {
            return Err(pre(
                "--vector is not an eigenvector of the transition matrix",
            ));
        }
    }
    if lambda.cmp_rational(&rat(1, 1)) != Some(Ordering::Greater) {
        return Err(pre("eigenvalue of --vector is not > 1"));
    }
    Ok(VectorTower::new(lambda, v, prec.bits))
}

fn kolmogorov(f: &GraphMap, vt: &VectorTower) -> Result<KolmogorovFunction, CliError> {
    let tower = StationaryTower::new(f).map_err(pre)?;
    KolmogorovFunction::from_vector(Arc::new(tower), vt).map_err(pre)
}

pub enum PathSelection {
    List(String),
    UpTo(usize),
}

pub struct MeasureArgs {
    pub vector: VectorSpec,
    pub normalize: Normalize,
    pub paths: PathSelection,
    pub format: Format,
    pub exact: bool,
    pub digits: usize,
}

/// Reduced paths up to `len`, by length and then by their token sequence.
pub fn listing_order(g: &Graph, len: usize) -> Vec<Path> {
    let mut ps = g.reduced_paths_up_to(len);
    ps.retain(|p| !p.is_empty());
    ps.sort_by_cached_key(|p| {
        (
            p.len(),
            p.iter().map(|&e| g.edge_token(e)).collect::<Vec<_>>(),
        )
    });
    ps
}

pub fn measure(doc: &InputDocument, map: &str, args: &MeasureArgs) -> Result<Outcome, CliError> {
    let f = get_map(doc, map)?;
    let g = f.domain();
    let prec = Precision::from_env();
    let vt = choose_vector(f, &args.vector, args.normalize, prec)?;
    let kf = kolmogorov(f, &vt)?;
    let paths = match &args.paths {
        PathSelection::UpTo(l) => listing_order(g, *l),
        PathSelection::List(s) => s
            .split(',')
            .map(|p| {
                let path = g
                    .parse_path(p)
                    .filter(|x| !x.is_empty())
                    .ok_or_else(|| CliError::Usage(format!("bad path `{}`", p.trim())))?;
                if !g.is_path(&path) || !traintrack::graph::is_reduced(&path) {
                    return Err(CliError::Usage(format!(
                        "`{}` is not a reduced path",
                        p.trim()
                    )));
                }
                Ok(path)
            })
            .collect::<Result<_, _>>()?,
    };
    let show = |x: &Interval| {
        if args.exact {
            exact(x)
        } else {
            dec(x, args.digits)
        }
    };
    let mut rows = Vec::with_capacity(paths.len());
    for p in &paths {
        rows.push((g.path_string(p), kf.value(p).map_err(pre)?));
    }
    let out = match args.format {
        Format::Json => {
            let entries: Vec<Value> = rows
                .iter()
                .map(|(p, x)| json!({ "path": p, "value": show(x) }))
                .collect();
            pretty(&json!({
                "schema": 1,
                "map": map,
                "lambda": show(&vt.lambda),
                "vector": vt.v.iter().map(show).collect::<Vec<_>>(),
                "entries": entries,
            }))
        }
        _ => {
            let mut s = String::from("path\tvalue\n");
            for (p, x) in &rows {
                s += &format!("{p}\t{}\n", show(x));
            }
            s
        }
    };
    Ok(Outcome::ok(out))
}

pub struct VerifyArgs {
    pub vector: VectorSpec,
    pub normalize: Normalize,
    pub max_len: usize,
    pub tol: String,
    pub format: Format,
}

#[derive(Debug, Clone, Default)]
struct Suite {
    name: &'static str,
    checked: usize,
    failed: usize,
    inconclusive: usize,
    max_defect: f64,
    note: String,
}

impl Suite {
    fn from_report(name: &'static str, r: &CheckReport) -> Suite {
        Suite {
            name,
            checked: r.checked,
            failed: r.failures.len(),
            inconclusive: r.inconclusive.len(),
            max_defect: r.max_defect_f64(),
            note: String::new(),
        }
    }

    fn passed(&self) -> bool {
        self.failed == 0 && self.inconclusive == 0
    }
}

fn run_suites(f: &GraphMap, args: &VerifyArgs, prec: Precision) -> Result<Vec<Suite>, CliError> {
    let tol = parse_rational(&args.tol)
        .ok_or_else(|| CliError::Usage(format!("bad tolerance `{}`", args.tol)))?;
    let vt = choose_vector(f, &args.vector, args.normalize, prec)?;
    let kf = kolmogorov(f, &vt)?;
    let g = f.domain();
    let mut suites = Vec::new();

    let r = verify_kolmogorov(&kf, args.max_len, &tol).map_err(pre)?;
    suites.push(Suite::from_report("kirchhoff+flip", &r));

    let mut sw = Suite {
        name: "switch",
        ..Suite::default()
    };
    for (_, d) in kf.weights().switch_defects(g) {
        sw.checked += 1;
        sw.max_defect = sw.max_defect.max(Interval::exact(d.mag()).to_f64());
        match d.within(&tol) {
            Some(true) => {}
            Some(false) => sw.failed += 1,
            None => sw.inconclusive += 1,
        }
    }
    suites.push(sw);

    let e = verify_eigen_measure(f, &kf, &vt.lambda, args.max_len, &tol).map_err(pre)?;
    let mut es = Suite::from_report("eigen", &e.checked);
    es.failed += e.outside_support.len();
    if !e.outside_support.is_empty() {
        es.note = format!(
            "{} paths outside the infinitely legal language",
            e.outside_support.len()
        );
    }
    suites.push(es);

    let t = kf.tower().level_for_length(args.max_len) + 12;
    let mut os = Suite {
        name: "oracle",
        note: format!("t={t}"),
        ..Suite::default()
    };
    for p in listing_order(g, args.max_len) {
        let est = frequency_oracle(f, &vt.v, &vt.lambda, &p, t).map_err(pre)?;
        let x = kf.value(&p).map_err(pre)?;
        os.checked += 1;
        os.max_defect = os.max_defect.max(est.tail.to_f64());
        if !est.admits(&x) {
            os.failed += 1;
        }
    }
    suites.push(os);
    Ok(suites)
}

pub fn verify(doc: &InputDocument, map: &str, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let f = get_map(doc, map)?;
    let mut prec = Precision::from_env();
    let mut suites = run_suites(f, args, prec)?;
    // Interval widths that straddle the tolerance get two retries.
    for _ in 0..2 {
        if suites.iter().all(|s| s.inconclusive == 0) {
            break;
        }
        prec = prec.doubled();
        suites = run_suites(f, args, prec)?;
    }
    let ok = suites.iter().all(Suite::passed);
    let out = match args.format {
        Format::Json => pretty(&json!({
            "schema": 1,
            "map": map,
            "max_len": args.max_len,
            "tol": args.tol,
            "precision_bits": prec.bits,
            "passed": ok,
            "suites": suites.iter().map(|s| json!({
                "name": s.name,
                "passed": s.passed(),
                "checked": s.checked,
                "failed": s.failed,
                "inconclusive": s.inconclusive,
                "max_defect": format!("{:.3e}", s.max_defect),
                "note": s.note,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = String::new();
            for x in &suites {
                s += &format!(
                    "{:<15} {}  checked={} failed={} inconclusive={} max_defect={:.3e}{}\n",
                    x.name,
                    if x.passed() { "PASS" } else { "FAIL" },
                    x.checked,
                    x.failed,
                    x.inconclusive,
                    x.max_defect,
                    if x.note.is_empty() {
                        String::new()
                    } else {
                        format!(" ({})", x.note)
                    }
                );
            }
            s += if ok {
                "all checks passed\n"
            } else {
                "verification failed\n"
            };
            s
        }
    };
    Ok(Outcome {
        out,
        code: if ok { 0 } else { EXIT_VERIFICATION },
    })
}

pub fn ergodic(
    doc: &InputDocument,
    name: &str,
    digits: usize,
    format: Format,
) -> Result<Outcome, CliError> {
    let s: &Substitution = doc
        .subst(name)
        .ok_or_else(|| CliError::Usage(format!("no substitution named `{name}`")))?;
    let report = ergodic_measures(s, Precision::from_env()).map_err(pre)?;
    let alphabet = s.alphabet();
    let out = match format {
        Format::Json => pretty(&json!({
            "schema": 1,
            "substitution": name,
            "alphabet": alphabet,
            "measures": report.measures.iter().map(|m| json!({
                "lambda": dec(&m.eigenpair.lambda_enclosure, digits),
                "frequencies": m.frequencies.iter().map(|x| dec(x, digits)).collect::<Vec<_>>(),
                "has_measure": m.measure.is_some(),
            })).collect::<Vec<_>>(),
            "small_eigenvalues": report.small_eigenvalues,
            "periodic_words": report.periodic_words.iter().map(|w| s.word_string(w)).collect::<Vec<_>>(),
        })),
        _ => {
            let mut o = format!("substitution {name} over {}\n", alphabet.join(" "));
            o += &format!("{} measure(s)\n", report.measures.len());
            for (i, m) in report.measures.iter().enumerate() {
                let fr: Vec<String> = alphabet
                    .iter()
                    .zip(&m.frequencies)
                    .map(|(a, x)| format!("{a}={}", dec(x, digits)))
                    .collect();
                o += &format!(
                    "measure {}: lambda={} frequencies {}\n",
                    i + 1,
                    dec(&m.eigenpair.lambda_enclosure, digits),
                    fr.join(" ")
                );
            }
            for l in &report.small_eigenvalues {
                o += &format!(
                    "warning: distinguished eigenvalue {l} is not > 1; no measure built for it\n"
                );
            }
            for w in &report.periodic_words {
                o += &format!(
                    "warning: periodic word {} found in the language\n",
                    s.word_string(w)
                );
            }
            o
        }
    };
    Ok(Outcome::ok(out))
}

/// Parses and reprints a document in canonical form.
pub fn format_document(doc: &InputDocument) -> Outcome {
    Outcome::ok(parse::print(doc))
}
