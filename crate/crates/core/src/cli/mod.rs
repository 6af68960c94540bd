//! Command-line front end. [`run`] does all the work and returns the exit
//! code and output so it can be tested without spawning a process.

pub mod corpus;
pub mod json;
pub mod parse;

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;

use crate::alexander::alexander_report;
use crate::characters::{find_fbyc_character, normalize_character, CharacterZ, FbycDecision};
use crate::classify::{classify_all, largeness, ClassificationReport, Largeness, ResidualFreeness, StaVerdict};
use crate::covers::{homology2_cover, maximality_cover, non_maximal_ends, sta_pipeline, StaOutcome};
use crate::equitable::{construct_equitable, verify_equitable};
use crate::gog::{GraphError, Presentation, TubularGraph};
use crate::lattice::Int;

use corpus::{corpus, CorpusEntry, LargenessKind, CHECKED};
use json::Certificate;
use parse::{format_equitable, parse_equitable, parse_graph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INAPPLICABLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tubular", version, about = "Decision procedures and certificates for tubular groups")]
pub struct Cli {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Emit a JSON certificate instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct SourceArgs {
    /// Graph file (`-` for stdin).
    #[arg(long, global = true, conflicts_with_all = ["corpus", "text"])]
    pub input: Option<String>,
    /// Built-in example, e.g. `gersten` or `wise-simple-3`.
    #[arg(long, global = true, conflicts_with = "text")]
    pub corpus: Option<String>,
    /// Graph given inline.
    #[arg(long, global = true)]
    pub text: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and check the graph.
    Validate,
    /// Print the graph and its presentation.
    Info,
    /// Decide whether the group is free-by-Z.
    Fbyc,
    /// Build (or check) an equitable set.
    Equitable {
        /// Check the set in this file instead of building one.
        #[arg(long)]
        verify: Option<String>,
    },
    /// Build a finite cover.
    Cover {
        #[arg(long, group = "kind")]
        maximal: bool,
        #[arg(long, group = "kind")]
        homology2: bool,
        #[arg(long, group = "kind")]
        sta: bool,
    },
    /// Alexander polynomial and biorderability index.
    Alexander,
    /// Run every analysis.
    Classify,
    /// Find a surjection onto F2, possibly from an index-two subgroup.
    SurjectF2,
    /// Classify the whole built-in corpus and compare with known verdicts.
    CorpusCheck,
}

/// Result of one invocation.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn new(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn error(code: i32, msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { code, stdout: String::new(), stderr }
    }
}

struct Loaded {
    label: String,
    graph: TubularGraph,
    entry: Option<CorpusEntry>,
}

fn load(src: &SourceArgs) -> Result<Loaded, Outcome> {
    if let Some(name) = &src.corpus {
        let entry = corpus(name).map_err(|e| Outcome::error(EXIT_INPUT, e.to_string()))?;
        return Ok(Loaded { label: format!("corpus:{name}"), graph: entry.graph.clone(), entry: Some(entry) });
    }
    let (label, text) = match (&src.input, &src.text) {
        (Some(path), _) => {
            let text = if path == "-" {
                std::io::read_to_string(std::io::stdin())
            } else {
                std::fs::read_to_string(path)
            };
            let text = text.map_err(|e| Outcome::error(EXIT_INPUT, format!("{path}: {e}")))?;
            (path.clone(), text)
        }
        (None, Some(text)) => ("inline".to_string(), text.clone()),
        (None, None) => return Err(Outcome::error(EXIT_INPUT, "no graph given; use --input, --corpus or --text")),
    };
    let graph = parse_graph(&text).map_err(|e| Outcome::error(EXIT_INPUT, format!("{label}: {e}")))?;
    Ok(Loaded { label, graph, entry: None })
}

fn invalid(g: &TubularGraph) -> Option<Outcome> {
    match g.ensure_valid() {
        Ok(()) => None,
        Err(GraphError::Invalid(vs)) => {
            let mut s = String::from("invalid graph:\n");
            for v in vs {
                let _ = writeln!(s, "  {v}");
            }
            Some(Outcome::error(EXIT_INPUT, s))
        }
        Err(e) => Some(Outcome::error(EXIT_INPUT, format!("invalid graph: {e}"))),
    }
}

fn internal(e: impl std::fmt::Display) -> Outcome {
    Outcome::error(EXIT_FAILED, format!("error: {e}"))
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::new(code, text)
            } else {
                Outcome::error(code, text)
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    if let Command::CorpusCheck = cli.command {
        return corpus_check(cli.json);
    }
    let loaded = match load(&cli.source) {
        Ok(l) => l,
        Err(o) => return o,
    };
    if let Some(o) = invalid(&loaded.graph) {
        return o;
    }
    let g = &loaded.graph;
    let pres = match g.presentation() {
        Ok(p) => p,
        Err(e) => return internal(e),
    };
    let mut cert = Certificate {
        input: json::input(&loaded.label, g),
        presentation: json::presentation(&pres, g),
        ..Default::default()
    };
    let mut text = String::new();
    let code = match &cli.command {
        Command::Validate => {
            let _ = writeln!(text, "valid: {} vertices, {} edges, betti {}", g.num_vertices(), g.num_edges(), g.num_edges() + 1 - g.num_vertices());
            EXIT_OK
        }
        Command::Info => {
            info_text(g, &pres, &mut text);
            EXIT_OK
        }
        Command::Fbyc => match cmd_fbyc(g, &pres, &mut cert, &mut text) {
            Ok(c) => c,
            Err(o) => return o,
        },
        Command::Equitable { verify } => match cmd_equitable(g, verify.as_deref(), &mut cert, &mut text) {
            Ok(c) => c,
            Err(o) => return o,
        },
        Command::Cover { maximal, homology2, sta } => {
            let kind = if *maximal {
                CoverKind::Maximal
            } else if *homology2 {
                CoverKind::Homology2
            } else {
                let _ = sta;
                CoverKind::Sta
            };
            match cmd_cover(&loaded, kind, &mut cert, &mut text) {
                Ok(c) => c,
                Err(o) => return o,
            }
        }
        Command::Alexander => match cmd_alexander(g, &pres, &mut cert, &mut text) {
            Ok(c) => c,
            Err(o) => return o,
        },
        Command::Classify => match cmd_classify(&loaded, &pres, &mut cert, &mut text) {
            Ok(c) => c,
            Err(o) => return o,
        },
        Command::SurjectF2 => match cmd_surject(g, &pres, &mut cert, &mut text) {
            Ok(c) => c,
            Err(o) => return o,
        },
        Command::CorpusCheck => unreachable!(),
    };
    if cli.json {
        let mut out = serde_json::to_string_pretty(&cert.into_value()).expect("serializable");
        out.push('\n');
        Outcome { code, stdout: out, stderr: if code == EXIT_OK { String::new() } else { text } }
    } else if code == EXIT_INAPPLICABLE {
        Outcome::error(code, text)
    } else {
        Outcome::new(code, text)
    }
}

fn info_text(g: &TubularGraph, pres: &Presentation, out: &mut String) {
    out.push_str(&g.to_text());
    let _ = writeln!(out, "betti: {}", g.num_edges() + 1 - g.num_vertices());
    let _ = writeln!(out, "generators ({}): {}", pres.num_generators(), pres.names.join(" "));
    let _ = writeln!(out, "relators ({}):", pres.relators.len());
    for r in &pres.relators {
        let _ = writeln!(out, "  {}", r.display_with(&pres.names));
    }
}

fn character_text(chi: &CharacterZ, pres: &Presentation) -> String {
    pres.names
        .iter()
        .zip(chi.generator_values(pres))
        .map(|(n, x)| format!("{n}={x}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_fbyc(g: &TubularGraph, pres: &Presentation, cert: &mut Certificate, out: &mut String) -> Result<i32, Outcome> {
    match find_fbyc_character(g).map_err(internal)? {
        FbycDecision::FreeByZ(chi) => {
            if !chi.satisfies(g) || !chi.nonzero_on_all_edges(g) {
                return Err(internal("character check failed"));
            }
            let _ = writeln!(out, "free-by-Z: yes");
            let _ = writeln!(out, "character: {}", character_text(&chi, pres));
            let vals: Vec<String> =
                (0..g.num_edges()).map(|e| format!("{}={}", g.edges[e].id, chi.edge_value(g, e))).collect();
            let _ = writeln!(out, "edge values: {}", vals.join(" "));
            cert.fbyc = json::fbyc(Some(&chi), None, g, pres);
        }
        FbycDecision::NotFreeByZ { witness_edge } => {
            let _ = writeln!(out, "free-by-Z: no");
            let _ = writeln!(out, "every character vanishes on edge {}", g.edges[witness_edge].id);
            cert.fbyc = json::fbyc(None, Some(witness_edge), g, pres);
        }
    }
    Ok(EXIT_OK)
}

const NOT_FBYC: &str = "no character nonzero on all edge groups";

fn fbyc_or_inapplicable(g: &TubularGraph, out: &mut String) -> Result<Option<CharacterZ>, Outcome> {
    match find_fbyc_character(g).map_err(internal)? {
        FbycDecision::FreeByZ(chi) => Ok(Some(chi)),
        FbycDecision::NotFreeByZ { witness_edge } => {
            let _ = writeln!(out, "{NOT_FBYC} (every character vanishes on edge {})", g.edges[witness_edge].id);
            Ok(None)
        }
    }
}

fn cmd_equitable(g: &TubularGraph, verify: Option<&str>, cert: &mut Certificate, out: &mut String) -> Result<i32, Outcome> {
    let set = match verify {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Outcome::error(EXIT_INPUT, format!("{path}: {e}")))?;
            parse_equitable(&text, g).map_err(|e| Outcome::error(EXIT_INPUT, format!("{path}: {e}")))?
        }
        None => {
            let Some(chi) = fbyc_or_inapplicable(g, out)? else { return Ok(EXIT_INAPPLICABLE) };
            construct_equitable(g, &chi).map_err(internal)?
        }
    };
    let report = verify_equitable(g, &set).map_err(internal)?;
    out.push_str(&format_equitable(&set, g));
    for b in &report.edges {
        let _ = writeln!(out, "# edge {}: {} = {}", g.edges[b.edge].id, b.src_sum, b.dst_sum);
    }
    let _ = writeln!(out, "# equitable: {}", if report.ok { "yes" } else { "no" });
    cert.equitable = json::equitable(&set, &report, g);
    Ok(if report.ok { EXIT_OK } else { EXIT_FAILED })
}

#[derive(Clone, Copy)]
enum CoverKind {
    Maximal,
    Homology2,
    Sta,
}

fn cover_text(c: &crate::covers::CoverResult, out: &mut String) {
    let _ = writeln!(out, "index: {}", c.index);
    out.push_str(&c.cover.to_text());
}

fn cmd_cover(l: &Loaded, kind: CoverKind, cert: &mut Certificate, out: &mut String) -> Result<i32, Outcome> {
    let g = &l.graph;
    match kind {
        CoverKind::Maximal => {
            let Some(raw) = fbyc_or_inapplicable(g, out)? else { return Ok(EXIT_INAPPLICABLE) };
            let chi = normalize_character(&raw).map_err(internal)?;
            let c = maximality_cover(g, &chi).map_err(internal)?;
            let ok = c.check_fibers(g).is_ok() && non_maximal_ends(&c.cover).is_empty();
            cover_text(&c, out);
            let _ = writeln!(out, "all inclusions maximal: {}", if ok { "yes" } else { "no" });
            cert.covers = serde_json::json!({ "maximal": json::cover(&c, g) });
            Ok(if ok { EXIT_OK } else { EXIT_FAILED })
        }
        CoverKind::Homology2 => {
            let c = homology2_cover(g).map_err(internal)?;
            let ok = c.check_fibers(g).is_ok() && !c.cover.has_self_loop();
            cover_text(&c, out);
            let _ = writeln!(out, "self loops: {}", if ok { "none" } else { "present" });
            cert.covers = serde_json::json!({ "homology2": json::cover(&c, g) });
            Ok(if ok { EXIT_OK } else { EXIT_FAILED })
        }
        CoverKind::Sta => match sta_pipeline(g).map_err(internal)? {
            StaOutcome::Witness(mut w) => {
                if let Some(r) = l.entry.as_ref().and_then(|e| e.expected.reference_sta_index) {
                    w.annotate_reference_index(&Int::from(r));
                }
                cover_text(&w.composite(), out);
                for n in &w.notes {
                    let _ = writeln!(out, "note: {n}");
                }
                cert.covers = serde_json::json!({ "sta": json::sta(&w, g) });
                Ok(EXIT_OK)
            }
            StaOutcome::Inapplicable { reason } => {
                let _ = writeln!(out, "inapplicable: {reason}");
                cert.covers = serde_json::json!({ "sta": { "status": "unknown", "reason": reason } });
                Ok(EXIT_INAPPLICABLE)
            }
        },
    }
}

fn cmd_alexander(g: &TubularGraph, pres: &Presentation, cert: &mut Certificate, out: &mut String) -> Result<i32, Outcome> {
    let Some(raw) = fbyc_or_inapplicable(g, out)? else { return Ok(EXIT_INAPPLICABLE) };
    let r = alexander_report(g, &raw).map_err(internal)?;
    let _ = writeln!(out, "character: {}", character_text(&r.character, pres));
    let _ = writeln!(out, "alexander polynomial: {}", r.alexander_poly);
    let _ = writeln!(out, "characteristic polynomial: {}", r.char_candidate);
    let orders: Vec<String> = r.cyclotomic_orders.iter().map(|(d, m)| format!("Phi_{d}^{m}")).collect();
    let _ = writeln!(out, "cyclotomic factors: {}", if orders.is_empty() { "none".into() } else { orders.join(" ") });
    let _ = writeln!(out, "remainder: {}", r.non_cyclotomic_remainder);
    match r.biorder_index {
        Some(k) => {
            let _ = writeln!(out, "biorderable subgroup of index {k}");
        }
        None => {
            let _ = writeln!(out, "no biorderability index (non-cyclotomic factor)");
        }
    }
    cert.fbyc = json::fbyc(Some(&raw), None, g, pres);
    cert.alexander = json::alexander(&r, g, pres);
    let ok = !r.theorem_violation && r.minor_ratio_ok && r.fundamental_identity_ok;
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn classify_with_reference(l: &Loaded) -> Result<ClassificationReport, Outcome> {
    let mut r = classify_all(&l.graph).map_err(internal)?;
    if let (StaVerdict::Witness(w), Some(x)) = (&mut r.sta, l.entry.as_ref().and_then(|e| e.expected.reference_sta_index)) {
        w.annotate_reference_index(&Int::from(x));
    }
    Ok(r)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn classify_text(r: &ClassificationReport, g: &TubularGraph, pres: &Presentation, out: &mut String) {
    let _ = writeln!(out, "Z^2: {}", yes_no(r.is_z2));
    match &r.fbyc {
        Some(chi) => {
            let _ = writeln!(out, "free-by-Z: yes ({})", character_text(chi, pres));
        }
        None => {
            let _ = writeln!(out, "free-by-Z: no");
        }
    }
    let off: Vec<String> = r.offenders.iter().map(|&(e, s)| format!("{}.{s}", g.edges[e].id)).collect();
    if off.is_empty() {
        let _ = writeln!(out, "maximal inclusions: yes");
    } else {
        let _ = writeln!(out, "maximal inclusions: no ({})", off.join(", "));
    }
    let _ = writeln!(out, "acylindrically hyperbolic: {}", yes_no(r.acylindrically_hyperbolic));
    match &r.residually_free {
        ResidualFreeness::Yes(n) => {
            let _ = writeln!(out, "residually free: yes (F_{n} x Z)");
        }
        ResidualFreeness::No(why) => {
            let _ = writeln!(out, "residually free: no ({why})");
        }
    }
    let large = match &r.largeness {
        Largeness::IsZ2 => "no (Z^2)".to_string(),
        Largeness::SurjectsF2(_) => "surjects onto F2".to_string(),
        Largeness::IndexTwoSurjects(..) => "index-2 subgroup surjects onto F2".to_string(),
    };
    let _ = writeln!(out, "large: {large}");
    match &r.sta {
        StaVerdict::Witness(w) => {
            let _ = writeln!(out, "strongest Tits alternative: witness cover of index {}", w.total_index);
            for n in &w.notes {
                let _ = writeln!(out, "  note: {n}");
            }
        }
        StaVerdict::Unknown { reason } => {
            let _ = writeln!(out, "strongest Tits alternative: unknown ({reason})");
        }
    }
    if let Some(set) = &r.equitable {
        let _ = writeln!(out, "equitable set:");
        for line in format_equitable(set, g).lines() {
            let _ = writeln!(out, "  {line}");
        }
    }
    if let Some(a) = &r.alexander {
        let _ = writeln!(out, "characteristic polynomial: {}", a.char_candidate);
        match a.biorder_index {
            Some(k) => {
                let _ = writeln!(out, "biorderable subgroup of index {k}");
            }
            None => {
                let _ = writeln!(out, "biorderability index: none");
            }
        }
    }
}

fn fill_classification(r: &ClassificationReport, g: &TubularGraph, pres: &Presentation, cert: &mut Certificate) {
    cert.fbyc = json::fbyc(r.fbyc.as_ref(), r.fbyc_witness_edge, g, pres);
    if let Some(set) = &r.equitable {
        if let Ok(rep) = verify_equitable(g, set) {
            cert.equitable = json::equitable(set, &rep, g);
        }
    }
    cert.covers = serde_json::json!({ "sta": json::sta_verdict(&r.sta, g) });
    if let Some(a) = &r.alexander {
        cert.alexander = json::alexander(a, g, pres);
    }
    cert.classification = json::classification(r, g);
}

fn cmd_classify(l: &Loaded, pres: &Presentation, cert: &mut Certificate, out: &mut String) -> Result<i32, Outcome> {
    let r = classify_with_reference(l)?;
    classify_text(&r, &l.graph, pres, out);
    fill_classification(&r, &l.graph, pres, cert);
    Ok(if r.is_consistent() { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_surject(g: &TubularGraph, pres: &Presentation, cert: &mut Certificate, out: &mut String) -> Result<i32, Outcome> {
    let Some(l) = largeness(g).map_err(internal)? else {
        let _ = writeln!(out, "no surjection onto F2 found");
        return Ok(EXIT_FAILED);
    };
    let code = match &l {
        Largeness::IsZ2 => {
            let _ = writeln!(out, "the group is Z^2 and does not surject onto F2");
            EXIT_INAPPLICABLE
        }
        Largeness::SurjectsF2(f) => {
            let _ = writeln!(out, "surjects onto F2:");
            for (n, w) in f.display(pres) {
                let _ = writeln!(out, "  {n} -> {w}");
            }
            EXIT_OK
        }
        Largeness::IndexTwoSurjects(c, f) => {
            let p = c.cover.presentation().map_err(internal)?;
            let _ = writeln!(out, "no direct surjection; the index-{} subgroup below surjects onto F2:", c.index);
            out.push_str(&c.cover.to_text());
            for (n, w) in f.display(&p) {
                let _ = writeln!(out, "  {n} -> {w}");
            }
            EXIT_OK
        }
    };
    cert.classification = serde_json::json!({ "largeness": json::largeness(&l, g) });
    Ok(code)
}

/// One comparison in the corpus check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub entry: String,
    pub field: &'static str,
    pub expected: String,
    pub found: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.expected == self.found
    }
}

/// Compare one corpus entry against its expected verdicts.
pub fn check_entry(entry: &CorpusEntry) -> Result<Vec<Check>, String> {
    let g = &entry.graph;
    let ex = &entry.expected;
    let l = Loaded { label: entry.name.clone(), graph: g.clone(), entry: Some(entry.clone()) };
    let r = classify_with_reference(&l).map_err(|o| o.stderr)?;
    let mut out = Vec::new();
    let mut push = |field: &'static str, expected: String, found: String| {
        out.push(Check { entry: entry.name.clone(), field, expected, found });
    };
    if let Some(b) = ex.fbyc {
        push("free_by_z", b.to_string(), r.fbyc.is_some().to_string());
    }
    if let Some(b) = ex.maximal {
        push("maximal_inclusions", b.to_string(), r.maximal_inclusions.to_string());
    }
    if let Some(b) = ex.acylindrically_hyperbolic {
        push("acylindrically_hyperbolic", b.to_string(), r.acylindrically_hyperbolic.to_string());
    }
    if let Some(m) = ex.maximality_cover_index {
        let found = match &r.fbyc {
            Some(raw) => {
                let chi = normalize_character(raw).map_err(|e| e.to_string())?;
                let c = maximality_cover(g, &chi).map_err(|e| e.to_string())?;
                let ok = c.check_fibers(g).is_ok() && non_maximal_ends(&c.cover).is_empty();
                format!("{} primitive={ok}", c.index)
            }
            None => "none".into(),
        };
        push("maximality_cover_index", format!("{m} primitive=true"), found);
    }
    let sta_index = match &r.sta {
        StaVerdict::Witness(w) => Some(w),
        StaVerdict::Unknown { .. } => None,
    };
    if let Some(k) = ex.sta_index {
        push("sta_index", k.to_string(), sta_index.map_or("unknown".into(), |w| w.total_index.to_string()));
    }
    if let Some(k) = ex.reference_sta_index {
        let found = match sta_index {
            Some(w) => {
                let flagged = w.total_index == Int::from(k) || w.notes.iter().any(|n| n.contains(&k.to_string()));
                format!("flagged={flagged} certified={}", w.all_inclusions_maximal && w.no_self_loops)
            }
            None => "unknown".into(),
        };
        push("sta_reference", "flagged=true certified=true".into(), found);
    }
    if let Some(b) = ex.sta_unknown {
        push("sta_unknown", b.to_string(), sta_index.is_none().to_string());
    }
    if let Some(k) = ex.biorder_index {
        let found = r.alexander.as_ref().and_then(|a| a.biorder_index).map_or("none".into(), |x| x.to_string());
        push("biorder_index", k.to_string(), found);
    }
    if let Some(kind) = ex.largeness {
        let found = match &r.largeness {
            Largeness::IsZ2 => LargenessKind::IsZ2,
            Largeness::SurjectsF2(_) => LargenessKind::Direct,
            Largeness::IndexTwoSurjects(c, _) => {
                if c.index.to_u32() != Some(2) {
                    return Err(format!("{}: double cover has index {}", entry.name, c.index));
                }
                LargenessKind::IndexTwo
            }
        };
        push("largeness", format!("{kind:?}"), format!("{found:?}"));
    }
    push("consistent", "true".into(), r.is_consistent().to_string());
    Ok(out)
}

fn corpus_check(as_json: bool) -> Outcome {
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all_ok = true;
    for name in CHECKED {
        let entry = corpus(name).expect("built-in entry");
        match check_entry(&entry) {
            Ok(checks) => {
                for c in checks {
                    let status = if c.passed() { "PASS" } else { "FAIL" };
                    all_ok &= c.passed();
                    let _ = writeln!(text, "{status} {:<18} {:<26} expected {} found {}", c.entry, c.field, c.expected, c.found);
                    rows.push(serde_json::json!({
                        "entry": c.entry, "field": c.field, "expected": c.expected, "found": c.found, "pass": c.passed(),
                    }));
                }
            }
            Err(e) => {
                all_ok = false;
                let _ = writeln!(text, "FAIL {name:<18} error: {e}");
                rows.push(serde_json::json!({ "entry": name, "error": e, "pass": false }));
            }
        }
    }
    let _ = writeln!(text, "corpus check: {}", if all_ok { "all verdicts match" } else { "MISMATCH" });
    let code = if all_ok { EXIT_OK } else { EXIT_FAILED };
    if as_json {
        let v = serde_json::json!({ "checks": rows, "ok": all_ok });
        Outcome::new(code, serde_json::to_string_pretty(&v).expect("serializable") + "\n")
    } else {
        Outcome::new(code, text)
    }
}
