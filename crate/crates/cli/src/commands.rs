use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rigiscope::corpus::{self, CorpusEntry};
use rigiscope::covers::{self, component_graph, ie_counts, peel, vertex_maximal_components, Cover};
use rigiscope::rank::RankOracle;
use rigiscope::report::{verdict_name, Report};
use rigiscope::sparsity::{self, maxwell_count, maxwell_violation};
use rigiscope::verify::{
    self, search_conjecture, Certificate, Conjecture, MaximalSets, SearchParams, Verdict,
};
use rigiscope::{graph, Error, Graph, Result, VertexSet};

use crate::{Common, CorpusName, Format, Outcome, Source, Theorem};

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn generator(spec: &[String], hinge: bool) -> Result<CorpusEntry> {
    let (name, rest) = spec
        .split_first()
        .ok_or_else(|| Error::InvalidInput("--gen needs a generator name".into()))?;
    let args = rest
        .iter()
        .map(|a| {
            a.parse::<u64>().map_err(|_| {
                Error::InvalidInput(format!("generator argument `{a}` is not a number"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    corpus::by_name(name, &args, hinge)
}

fn load(source: &Source, hinge: bool) -> Result<CorpusEntry> {
    match (&source.input, &source.generator) {
        (Some(path), _) => Ok(CorpusEntry {
            name: path.display().to_string(),
            graph: graph::read_graph(&read_file(path)?)?,
            cover: None,
        }),
        (None, Some(spec)) => generator(spec, hinge),
        (None, None) => Err(Error::InvalidInput(
            "give a graph with --in PATH or --gen NAME".into(),
        )),
    }
}

fn load_cover(g: &Graph, path: Option<&Path>) -> Result<Option<Cover>> {
    path.map(|p| Cover::new(g, graph::read_cover(&read_file(p)?)?))
        .transpose()
}

fn oracle(common: &Common) -> Result<RankOracle> {
    RankOracle::new(common.d, common.trials, common.seed())
}

fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(report.to_json() + "\n"),
        Format::Text => Ok(text(report)),
        Format::Dot => Err(Error::InvalidInput(
            "dot output is available for analyze and generate only".into(),
        )),
    }
}

fn text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}: {}", report.theorem_or_conjecture, report.graph);
    for (k, v) in &report.numbers {
        let _ = writeln!(out, "  {k}: {v}");
    }
    let _ = writeln!(out, "verdict: {}", report.verdict);
    let _ = writeln!(
        out,
        "seed: {}  oracle: {} trials mod {}",
        report.seed, report.oracle.trials, report.oracle.prime
    );
    let _ = writeln!(out, "note: {}", report.confidence);
    let _ = writeln!(out, "runtime: {} ms", report.runtime_ms);
    out
}

fn flag(b: bool) -> i64 {
    i64::from(b)
}

pub fn analyze(
    source: &Source,
    hinge: bool,
    cover_path: Option<&Path>,
    samples: usize,
    common: &Common,
) -> Result<Outcome> {
    let start = Instant::now();
    let entry = load(source, hinge)?;
    let g = &entry.graph;
    let d = common.d;
    let o = oracle(common)?;
    let mut r = Report::new("analyze", &entry.name, &o)
        .num("vertices", g.n() as i64)
        .num("edges", g.edge_count() as i64)
        .num("maxwell_count", maxwell_count(g, d, true));
    let mut details = serde_json::Map::new();

    let violation = maxwell_violation(g, d);
    r = r.num("maxwell_independent", flag(violation.is_none()));
    if let Some(v) = &violation {
        details.insert(
            "violation".into(),
            serde_json::to_value(v).expect("serializable"),
        );
    }
    r = r.num("rank", o.generic_rank(g) as i64);
    let (sets, _) = verify::maximal_sets(
        g,
        d,
        MaximalSets::Sample {
            k: samples,
            seed: common.seed(),
        },
    );
    let sizes: Vec<usize> = sets.iter().map(Vec::len).collect();
    r = r
        .num(
            "greedy_min",
            sizes.iter().copied().min().unwrap_or(0) as i64,
        )
        .num(
            "greedy_max",
            sizes.iter().copied().max().unwrap_or(0) as i64,
        );

    let mut highlight = sets
        .first()
        .map(|s| s.iter().map(|&i| g.edge(i)).collect())
        .unwrap_or_default();
    let mut component_dot = None;
    if violation.is_none() {
        let cover = match load_cover(g, cover_path)? {
            Some(c) => c,
            None => vertex_maximal_components(g, d)?,
        };
        let counts = ie_counts(g, &cover, &o);
        r = r
            .num("components", cover.len() as i64)
            .num("two_thin", flag(covers::is_2thin(&cover)))
            .num("strong_two_thin", flag(covers::is_strong_2thin(g, &cover)))
            .num("ie_rank", counts.ie_rank)
            .num("ie_rank_plain", counts.ie_rank_plain)
            .num("ie_full", counts.ie_full);
        let cg = component_graph(g, &cover, d);
        r = r.num("peel3_kernel_empty", flag(peel(&cg, 3).kernel_is_empty()));
        details.insert(
            "components".into(),
            serde_json::to_value(cover.parts()).expect("serializable"),
        );
        component_dot = Some(cg.to_dot());
        highlight = Vec::new();
    } else if let Some(v) = &violation {
        highlight = g.induced_edges(&v.deficiency.witness);
    }
    r.verdict = "pass".into();
    r.details = serde_json::Value::Object(details);
    r.runtime_ms = start.elapsed().as_millis() as u64;
    let output = match common.format {
        Format::Dot => {
            let mut out = graph::write_dot(g, &highlight);
            if let Some(dot) = component_dot {
                out.push_str(&dot);
            }
            out
        }
        f => render(&r, f)?,
    };
    Ok(Outcome { output, code: 0 })
}

pub struct VerifyRequest<'a> {
    pub theorem: Theorem,
    pub corpus: Option<CorpusName>,
    pub source: &'a Source,
    pub hinge: bool,
    pub cover: Option<&'a Path>,
    pub all: bool,
    pub samples: usize,
    pub common: &'a Common,
}

fn theorem_name(t: Theorem) -> &'static str {
    match t {
        Theorem::Main => "main",
        Theorem::WeakRankIe => "weak-rank-ie",
        Theorem::RankIe => "rank-ie",
        Theorem::ProperMaximal => "proper-maximal",
        Theorem::Complete2thin => "complete-2thin",
        Theorem::ProperComplete2thin => "proper-complete-2thin",
    }
}

/// Certificates for one graph.
fn certificates(
    req: &VerifyRequest,
    g: &Graph,
    cover: Option<Cover>,
    o: &RankOracle,
) -> Result<Vec<Certificate>> {
    let cap = req.common.cap_scan;
    let one = |c: Certificate| Ok(vec![c]);
    match req.theorem {
        Theorem::Main => {
            let mode = if req.all {
                MaximalSets::All {
                    cap: Some(req.common.cap_enum),
                }
            } else {
                MaximalSets::Sample {
                    k: req.samples,
                    seed: req.common.seed(),
                }
            };
            Ok(verify::verify_main(g, mode, o).certificates)
        }
        Theorem::WeakRankIe => {
            let cover = match cover {
                Some(c) => c,
                None => vertex_maximal_components(g, o.d)?,
            };
            one(verify::verify_weak_rank_ie(g, &cover, o))
        }
        Theorem::RankIe => match cover {
            Some(c) => one(verify::verify_rank_ie_with_cover(g, &c, o)),
            None => one(verify::verify_rank_ie(g, o)),
        },
        Theorem::ProperMaximal => one(verify::verify_proper_maximal(g, o, cap)?),
        Theorem::Complete2thin => match cover {
            Some(c) => one(verify::complete_2thin_certificate(
                g,
                &c,
                o,
                "complete-2thin",
                false,
            )),
            None => one(verify::verify_complete_2thin(g, o, cap)?),
        },
        Theorem::ProperComplete2thin => match cover {
            Some(c) => one(verify::complete_2thin_certificate(
                g,
                &c,
                o,
                "proper-complete-2thin",
                true,
            )),
            None => one(verify::verify_proper_complete_2thin(g, o, cap)?),
        },
    }
}

fn summarize(certs: &[Certificate]) -> Verdict {
    if certs.iter().any(|c| c.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if certs.iter().any(|c| c.verdict == Verdict::Pass) {
        Verdict::Pass
    } else {
        Verdict::Inapplicable
    }
}

pub fn verify(req: &VerifyRequest) -> Result<Outcome> {
    let start = Instant::now();
    let o = oracle(req.common)?;
    let name = theorem_name(req.theorem);
    let mut report = if req.corpus.is_some() {
        let entries = match req.theorem {
            Theorem::WeakRankIe | Theorem::RankIe => corpus::maxwell_independent(o.d),
            _ => corpus::builtin(),
        };
        let mut rows = Vec::new();
        let mut tally = [0i64; 3];
        for entry in &entries {
            // Graphs beyond the exhaustive scan limit are recorded as not applicable.
            let (verdict, numbers) = match certificates(req, &entry.graph, None, &o) {
                Ok(certs) => {
                    let v = summarize(&certs);
                    let first = certs
                        .iter()
                        .find(|c| c.verdict == v)
                        .map(|c| c.numbers.clone());
                    (
                        v,
                        serde_json::json!({ "certificates": certs.len(), "numbers": first }),
                    )
                }
                Err(e) => (
                    Verdict::Inapplicable,
                    serde_json::json!({ "reason": e.to_string() }),
                ),
            };
            tally[match verdict {
                Verdict::Pass => 0,
                Verdict::Fail => 1,
                Verdict::Inapplicable => 2,
            }] += 1;
            rows.push(serde_json::json!({ "graph": entry.name, "verdict": verdict_name(verdict), "detail": numbers }));
        }
        let mut r = Report::new(name, "corpus builtin", &o)
            .num("graphs", entries.len() as i64)
            .num("pass", tally[0])
            .num("fail", tally[1])
            .num("inapplicable", tally[2]);
        r.verdict = if tally[1] > 0 { "fail" } else { "pass" }.into();
        r.details = serde_json::Value::Array(rows);
        r
    } else {
        let entry = load(req.source, req.hinge)?;
        let cover = load_cover(&entry.graph, req.cover)?;
        let certs = certificates(req, &entry.graph, cover, &o)?;
        let verdict = summarize(&certs);
        let mut r = match certs.as_slice() {
            [c] => Report::from_certificate(c, &entry.name, &o),
            _ => {
                let mut r = Report::new(name, &entry.name, &o);
                r.details = serde_json::to_value(&certs).expect("serializable");
                r
            }
        };
        r.verdict = verdict_name(verdict).into();
        if certs.len() != 1 {
            r = r.num("certificates", certs.len() as i64);
            if let Some(rank) = certs.first().and_then(|c| c.numbers.get("rank_G")) {
                r = r.num("rank", *rank);
            }
            if let Some(min) = certs.iter().filter_map(|c| c.numbers.get("M")).min() {
                r = r.num("min_M", *min);
            }
        }
        r
    };
    report.runtime_ms = start.elapsed().as_millis() as u64;
    let code = if report.verdict == "fail" { 20 } else { 0 };
    Ok(Outcome {
        output: render(&report, req.common.format)?,
        code,
    })
}

pub fn search(
    conjecture: &str,
    n: usize,
    budget: usize,
    samples: usize,
    common: &Common,
) -> Result<Outcome> {
    let conj: Conjecture = conjecture.parse()?;
    let o = oracle(common)?;
    let params = SearchParams {
        seed: common.seed(),
        budget,
        n_max: n,
        samples,
        cap_enum: common.cap_enum,
    };
    let s = search_conjecture(conj, &params, &o)?;
    let report = Report::from_search(&s, &o);
    let mut output = render(&report, common.format)?;
    if let (Format::Text, Some(c)) = (common.format, &s.counterexample) {
        let _ = writeln!(
            output,
            "counterexample #{} ({}):\n{}",
            c.index, c.source, c.graph
        );
    }
    let code = if s.counterexample.is_some() { 10 } else { 0 };
    Ok(Outcome { output, code })
}

pub fn generate(
    spec: &[String],
    hinge: bool,
    out: Option<&Path>,
    cover_out: Option<&Path>,
    common: &Common,
) -> Result<Outcome> {
    let entry = generator(spec, hinge)?;
    let g = &entry.graph;
    let text = match common.format {
        Format::Dot => graph::write_dot(g, &[]),
        _ => graph::write_graph(g),
    };
    if let Some(path) = cover_out {
        let parts: Vec<VertexSet> = match &entry.cover {
            Some(parts) => parts.clone(),
            None if sparsity::is_maxwell_independent(g, common.d) => {
                vertex_maximal_components(g, common.d)?.parts().to_vec()
            }
            None => {
                return Err(Error::InvalidInput(format!(
                    "`{}` has no recorded cover and is not Maxwell-independent",
                    entry.name
                )))
            }
        };
        write_file(path, &graph::write_cover(&parts))?;
    }
    let output = match out {
        Some(path) => {
            write_file(path, &text)?;
            String::new()
        }
        None => text,
    };
    Ok(Outcome { output, code: 0 })
}
