//! Query execution: one [`Report`] per query with a headline, a text body and structured data.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use exheart::acyclic::{is_resolving, Classifier, DegreeReport, FLAG_NAMES};
use exheart::complex::Complex;
use exheart::exact::{check_maximally_nonnegative, standard_name, ExactSubcat, MaxNegVerdict, Structure};
use exheart::extresn::ExtResolution;
use exheart::functor::{
    is_effaceable, membership_completion, transported_projective_dimension, weak_kernel_resolution, Completion, FpFunctor,
    ResolutionOutcome, Transport,
};
use exheart::heart::{
    characterize, complex_name, completion_crosscheck, compute_heart, effectively_split, hearts_of_hearts, heart_membership, maximal_t_pairs,
    Heart, TPairReport, Universe, UniverseConfig,
};
use exheart::module::decompose;
use exheart::quiver::PathAlgebra;
use exheart::status::Verdict;
use exheart::{Error, Result};

use crate::workspace::{field_text, Query, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Unknown,
    Fail,
}

impl Status {
    pub fn word(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Unknown => "unknown",
            Status::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub query: String,
    pub status: Status,
    pub headline: String,
    pub body: Vec<String>,
    pub data: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub bound: usize,
    pub window: (i32, i32),
    pub depth: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { bound: 2, window: (-3, 3), depth: 8 }
    }
}

pub struct Runner<'a> {
    pub ws: &'a Workspace,
    pub opts: Options,
    universes: BTreeMap<String, (Universe, Classifier)>,
}

fn verdict_json<W>(v: &Verdict<W>) -> Value {
    match v {
        Verdict::Yes(_) => json!({"verdict": "yes"}),
        Verdict::No(r) => json!({"verdict": "no", "reason": r}),
        Verdict::Unknown(r) => json!({"verdict": "unknown", "reason": r}),
    }
}

fn verdict_text<W>(v: &Verdict<W>) -> String {
    match v {
        Verdict::Yes(_) => "yes".into(),
        Verdict::No(r) => format!("no ({r})"),
        Verdict::Unknown(r) => format!("unknown ({r})"),
    }
}

fn status_of<W>(v: &Verdict<W>) -> Status {
    if v.is_unknown() {
        Status::Unknown
    } else {
        Status::Pass
    }
}

pub fn maxneg_text(v: &MaxNegVerdict) -> String {
    match v {
        MaxNegVerdict::VerifiedUpToBound(b) => format!("VerifiedUpToBound({b})"),
        MaxNegVerdict::Counterexample { condition, source_mult, target_mult, .. } => {
            format!("Counterexample({condition:?}, source {source_mult:?}, target {target_mult:?})")
        }
    }
}

/// Name of a module as a sum of standard indecomposables.
pub fn module_name(alg: &PathAlgebra, m: &exheart::module::Module) -> String {
    if m.is_zero() {
        return "0".into();
    }
    match decompose(alg, m) {
        Ok(parts) => {
            let mut names: Vec<String> = parts.iter().map(|p| standard_name(alg, p)).collect();
            names.sort_by_key(|n| exheart::heart::display_key(n));
            names.join("+")
        }
        Err(_) => format!("M({})", m.dims.iter().map(usize::to_string).collect::<Vec<_>>().join(",")),
    }
}

fn complex_terms(alg: &PathAlgebra, x: &Complex) -> Vec<(i32, String)> {
    match x.support() {
        None => Vec::new(),
        Some((lo, hi)) => (lo..=hi).map(|n| (n, module_name(alg, x.term(n)))).collect(),
    }
}

fn parse_heart(s: &str) -> Option<Heart> {
    match s {
        "LHb" => Some(Heart::LHb),
        "RHb" => Some(Heart::RHb),
        _ => s.strip_prefix("LH").and_then(|n| n.parse().ok()).map(Heart::LHn),
    }
}

fn tpair_json(r: &TPairReport) -> Value {
    json!({
        "orthogonal": r.orthogonal(),
        "right_maximal": r.right_maximal,
        "left_maximal": r.left_maximal,
        "complete": r.complete,
        "violations": r.violations.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
    })
}

fn tpair_line(label: &str, r: &TPairReport) -> String {
    format!(
        "{label}: orthogonal {}, right maximal {}, left maximal {}{}",
        r.orthogonal(),
        r.right_maximal,
        r.left_maximal,
        if r.complete { "" } else { " (universe incomplete)" }
    )
}

impl<'a> Runner<'a> {
    pub fn new(ws: &'a Workspace, opts: Options) -> Runner<'a> {
        Runner { ws, opts, universes: BTreeMap::new() }
    }

    fn subcat(&self, name: &str) -> Result<&'a ExactSubcat> {
        self.ws.subcat(name).ok_or_else(|| Error::Input(format!("unknown subcategory `{name}`")))
    }

    fn complex(&self, name: &str) -> Result<&'a Complex> {
        self.ws.complex(name).ok_or_else(|| Error::Input(format!("unknown complex `{name}`")))
    }

    fn universe(&mut self, name: &str) -> Result<&(Universe, Classifier)> {
        if !self.universes.contains_key(name) {
            let e = self.subcat(name)?;
            let cfg = UniverseConfig { window: self.opts.window, ..UniverseConfig::default() };
            let u = Universe::new(e, cfg)?;
            let cls = Classifier::new(e)?;
            self.universes.insert(name.to_string(), (u, cls));
        }
        Ok(&self.universes[name])
    }

    /// Runs a query given as words, e.g. `["heart", "compute", "E", "LHb"]`.
    pub fn run(&mut self, q: &Query) -> Report {
        let text = q.to_string();
        let mut r = match self.dispatch(&q.words) {
            Ok(r) => r,
            Err(e) => Report { query: String::new(), status: Status::Fail, headline: format!("error: {e}"), body: Vec::new(), data: json!({"error": e.to_string()}) },
        };
        r.query = text;
        if let Some(exp) = &q.expect {
            if r.status != Status::Fail && *exp != r.headline {
                r.status = Status::Fail;
                r.body.push(format!("expected: {exp}"));
            }
        }
        r
    }

    fn dispatch(&mut self, words: &[String]) -> Result<Report> {
        let w: Vec<&str> = words.iter().map(String::as_str).filter(|w| *w != "in").collect();
        let arg = |i: usize, what: &str| -> Result<&str> { w.get(i).copied().ok_or_else(|| Error::Input(format!("missing {what}"))) };
        match w.first().copied() {
            Some("check") => match w.get(1) {
                None => Ok(self.check_workspace()),
                Some(e) => self.check(e),
            },
            Some("classify") => {
                let e = match w.get(2) {
                    Some(e) => e.to_string(),
                    None => self.ws.subcats.first().map(|s| s.name.clone()).ok_or_else(|| Error::Input("no subcategory declared".into()))?,
                };
                self.classify(arg(1, "complex")?, &e)
            }
            Some("resolve") => self.resolve(arg(1, "complex or map")?, arg(2, "subcategory")?),
            Some("functor") => self.functor(arg(1, "map")?, arg(2, "subcategory")?),
            Some("heart") => match arg(1, "`compute` or `member`")? {
                "compute" => self.heart_compute(arg(2, "subcategory")?, arg(3, "heart")?),
                "member" => self.heart_member(arg(2, "complex")?, arg(3, "subcategory")?, arg(4, "heart")?),
                t => Err(Error::Input(format!("unknown heart query `{t}`"))),
            },
            Some("tpair") => {
                let i = if w.get(1) == Some(&"verify") { 2 } else { 1 };
                self.tpair(arg(i, "subcategory")?)
            }
            Some("maxneg") => self.maxneg(arg(1, "subcategory")?),
            Some("characterize") => self.characterize(arg(1, "subcategory")?),
            Some("crosscheck") => self.crosscheck(arg(1, "subcategory")?),
            Some(t) => Err(Error::Input(format!("unknown query `{t}`"))),
            None => Err(Error::Input("empty query".into())),
        }
    }

    fn check_workspace(&self) -> Report {
        let ws = self.ws;
        let alg = &ws.alg;
        let headline = format!(
            "{} vertices, {} arrows, dim {}, {} modules, {} maps, {} subcategories, {} complexes",
            ws.vertices.len(),
            ws.arrows.len(),
            alg.dim(),
            ws.modules.len(),
            ws.maps.len(),
            ws.subcats.len(),
            ws.complexes.len()
        );
        let modules: BTreeMap<String, Value> =
            ws.modules.iter().map(|m| (m.name.clone(), json!({"dims": m.value.dims, "name": module_name(alg, &m.value)}))).collect();
        let body = ws.modules.iter().map(|m| format!("{} = {} dims {:?}", m.name, module_name(alg, &m.value), m.value.dims)).collect();
        Report {
            query: String::new(),
            status: Status::Pass,
            headline,
            body,
            data: json!({
                "field": field_text(ws.field),
                "algebra_dim": alg.dim(),
                "hereditary": alg.is_hereditary_presentation(),
                "modules": modules,
            }),
        }
    }

    fn check(&self, name: &str) -> Result<Report> {
        let e = self.subcat(name)?;
        let alg = &e.alg;
        let gens: Vec<String> = e.generators.iter().map(|g| module_name(alg, g)).collect();
        let structure = match e.structure {
            Structure::Split => "split",
            Structure::Induced => "induced",
        };
        let ext_proj: Vec<bool> = e.generators.iter().map(|g| e.is_ext_projective(g)).collect();
        let resolving = e.structure == Structure::Induced && is_resolving(e)?;
        let split = effectively_split(e);
        let gamma_dim = Transport::new(e)?.gamma.dim();
        let headline = format!("add({}) {structure}", gens.join(", "));
        let body = vec![
            format!("Ext-projective generators: {ext_proj:?}"),
            format!("resolving: {resolving}"),
            format!("every conflation splits: {split}"),
            format!("dim End(T): {gamma_dim}"),
        ];
        Ok(Report {
            query: String::new(),
            status: Status::Pass,
            headline,
            body,
            data: json!({
                "generators": gens,
                "structure": structure,
                "ext_projective": ext_proj,
                "resolving": resolving,
                "split": split,
                "gamma_dim": gamma_dim,
            }),
        })
    }

    fn classify(&self, c: &str, e: &str) -> Result<Report> {
        let x = self.complex(c)?;
        let cls = Classifier::new(self.subcat(e)?)?;
        let reports = cls.report(x)?;
        let mut status = Status::Pass;
        let mut body = vec![format!("{:>6} {}", "degree", FLAG_NAMES.iter().map(|f| format!("{f:>10}")).collect::<String>())];
        let mut rows = Vec::new();
        for r in &reports {
            let flags = r.flags();
            if flags.iter().any(|f| f.is_unknown()) {
                status = Status::Unknown;
            }
            body.push(format!("{:>6} {}", r.degree, flags.iter().map(|f| format!("{:>10}", f.label())).collect::<String>()));
            rows.push(degree_json(r));
        }
        let acyclic = reports.iter().all(|r| r.e_acyclic.is_yes());
        let left = reports.iter().all(|r| r.left_ext.is_yes());
        Ok(Report {
            query: String::new(),
            status,
            headline: format!("E-acyclic {acyclic}, left Ext-acyclic {left}"),
            body,
            data: json!({"degrees": rows, "terms": complex_terms(&cls.e().alg, x)}),
        })
    }

    fn resolve(&self, what: &str, e: &str) -> Result<Report> {
        let ex = self.subcat(e)?;
        let alg = &ex.alg;
        if let Some(x) = self.ws.complex(what) {
            let cls = Classifier::new(ex)?;
            let v = ExtResolution::certify(&cls, x)?;
            return Ok(Report {
                query: String::new(),
                status: status_of(&v),
                headline: format!("Ext-resolution: {}", v.label()),
                body: vec![verdict_text(&v)],
                data: json!({"certify": verdict_json(&v), "terms": complex_terms(alg, x)}),
            });
        }
        let f = self.ws.map(what).ok_or_else(|| Error::Input(format!("unknown complex or map `{what}`")))?;
        let res = weak_kernel_resolution(ex, &FpFunctor::new(f.clone()), self.opts.depth)?;
        let (outcome, status) = match &res.outcome {
            ResolutionOutcome::Bounded => ("bounded".to_string(), Status::Pass),
            ResolutionOutcome::Periodic { first, again } => (format!("periodic (degrees {first} and {again})"), Status::Pass),
            ResolutionOutcome::Truncated(d) => (format!("truncated at depth {d}"), Status::Unknown),
        };
        let terms = complex_terms(alg, &res.complex);
        let body = terms.iter().map(|(n, t)| format!("degree {n}: {t}")).collect();
        Ok(Report { query: String::new(), status, headline: format!("weak-kernel resolution {outcome}"), body, data: json!({"outcome": outcome, "terms": terms}) })
    }

    fn functor(&self, map: &str, e: &str) -> Result<Report> {
        let ex = self.subcat(e)?;
        let alg = &ex.alg;
        let f = FpFunctor::new(self.ws.map(map).ok_or_else(|| Error::Input(format!("unknown map `{map}`")))?.clone());
        let values: Vec<(String, usize)> = ex.generators.iter().map(|g| (module_name(alg, g), f.evaluate_dim(alg, g))).collect();
        let zero = f.is_zero(ex);
        let eff = is_effaceable(ex, &f)?;
        let rb = membership_completion(ex, &f, Completion::Rb, self.opts.depth)?;
        let tr = Transport::new(ex)?;
        let pd = transported_projective_dimension(&tr, &f, self.opts.depth)?;
        let status = if eff.is_unknown() || rb.is_unknown() { Status::Unknown } else { Status::Pass };
        let body = vec![
            format!("values: {}", values.iter().map(|(n, d)| format!("{n}:{d}")).collect::<Vec<_>>().join(" ")),
            format!("effaceable: {}", verdict_text(&eff)),
            format!("in R^b: {}", verdict_text(&rb)),
            format!("projective dimension over End(T)^op: {}", pd.map_or("infinite or beyond depth".to_string(), |d| d.to_string())),
        ];
        Ok(Report {
            query: String::new(),
            status,
            headline: format!("zero {zero}, effaceable {}, R^b {}", eff.label(), rb.label()),
            body,
            data: json!({
                "values": values.iter().map(|(n, d)| json!([n, d])).collect::<Vec<_>>(),
                "zero": zero,
                "effaceable": verdict_json(&eff),
                "rb": verdict_json(&rb),
                "projective_dimension": pd,
            }),
        })
    }

    fn heart_compute(&mut self, e: &str, which: &str) -> Result<Report> {
        let h = parse_heart(which).ok_or_else(|| Error::Input(format!("unknown heart `{which}`, expected LHb, RHb or LH<n>")))?;
        let (u, cls) = self.universe(e)?;
        let d = compute_heart(u, cls, h)?;
        let status = if d.complete { Status::Pass } else { Status::Unknown };
        let mut body = vec![format!("hom table: {:?}", d.hom_table), format!("non-negative: {}", d.nonnegative)];
        if !d.undetermined.is_empty() {
            body.push(format!("undetermined: {}", d.undetermined.join(", ")));
        }
        if let Some(n) = &u.notice {
            body.push(format!("notice: {n}"));
        }
        Ok(Report {
            query: String::new(),
            status,
            headline: d.names.join(", "),
            body,
            data: json!({
                "heart": h.label(),
                "generators": d.names,
                "hom_table": d.hom_table,
                "nonnegative": d.nonnegative,
                "undetermined": d.undetermined,
                "complete": d.complete,
                "notice": u.notice,
            }),
        })
    }

    fn heart_member(&self, c: &str, e: &str, which: &str) -> Result<Report> {
        let h = parse_heart(which).ok_or_else(|| Error::Input(format!("unknown heart `{which}`")))?;
        let x = self.complex(c)?;
        let cls = Classifier::new(self.subcat(e)?)?;
        let v = heart_membership(&cls, x, h)?;
        Ok(Report {
            query: String::new(),
            status: status_of(&v),
            headline: format!("{}: {}", h.label(), v.label()),
            body: vec![verdict_text(&v)],
            data: json!({"heart": h.label(), "membership": verdict_json(&v), "name": complex_name(&cls.e().alg, x)}),
        })
    }

    fn tpair(&mut self, e: &str) -> Result<Report> {
        let (u, cls) = self.universe(e)?;
        let t = maximal_t_pairs(u, cls)?;
        let hh = hearts_of_hearts(u, cls)?;
        let names = |idx: &[usize]| -> Vec<String> {
            let mut v: Vec<String> = idx.iter().map(|&i| u.candidates[i].name.clone()).collect();
            v.sort_by_key(|n| exheart::heart::display_key(n));
            v
        };
        let ok = [&t.standard, &t.first, &t.second].iter().all(|r| r.orthogonal() && r.right_maximal);
        let complete = t.standard.complete && t.first.complete && t.second.complete;
        let status = if !complete { Status::Unknown } else { Status::Pass };
        let body = vec![
            tpair_line("(U, V_l)", &t.standard),
            tpair_line("(U_r(LH E), V_l)", &t.first),
            tpair_line("(U_r, V_l(RH E))", &t.second),
            format!("LH: {}", names(&hh.lh).join(", ")),
            format!("RH: {}", names(&hh.rh).join(", ")),
            format!("RH(LH): {}", names(&hh.rh_of_lh).join(", ")),
            format!("LH(RH): {}", names(&hh.lh_of_rh).join(", ")),
            format!("first maximal heart: {}", names(&t.first_heart).join(", ")),
            format!("second maximal heart: {}", names(&t.second_heart).join(", ")),
        ];
        Ok(Report {
            query: String::new(),
            status,
            headline: format!("orthogonal and right maximal: {ok}; LH(RH) = RH {}, RH(LH) = LH {}", names(&hh.lh_of_rh) == names(&hh.rh), names(&hh.rh_of_lh) == names(&hh.lh)),
            body,
            data: json!({
                "standard": tpair_json(&t.standard),
                "first": tpair_json(&t.first),
                "second": tpair_json(&t.second),
                "first_heart": names(&t.first_heart),
                "second_heart": names(&t.second_heart),
                "lh": names(&hh.lh),
                "rh": names(&hh.rh),
                "rh_of_lh": names(&hh.rh_of_lh),
                "lh_of_rh": names(&hh.lh_of_rh),
            }),
        })
    }

    fn maxneg(&self, e: &str) -> Result<Report> {
        let ex = self.subcat(e)?;
        let v = check_maximally_nonnegative(ex, self.opts.bound)?;
        let text = maxneg_text(&v);
        Ok(Report { query: String::new(), status: Status::Pass, headline: text.clone(), body: Vec::new(), data: json!({"verdict": text, "verified": v.verified()}) })
    }

    fn characterize(&mut self, e: &str) -> Result<Report> {
        let bound = self.opts.bound;
        let (u, cls) = self.universe(e)?;
        let c = characterize(u, cls, bound)?;
        let status = if c.complete { Status::Pass } else { Status::Unknown };
        Ok(Report {
            query: String::new(),
            status,
            headline: format!("consistent {}, maximally non-negative {}", c.consistent(), c.hearts_are_e),
            body: vec![
                format!("LH^b = E: {}", c.lh_is_e),
                format!("LH^b = RH^b = E: {}", c.hearts_are_e),
                format!("V_l = V: {}", c.vleft_is_v),
                format!("regions agree: {}", c.regions_agree),
                format!("mono scan: {}", maxneg_text(&c.monos)),
                format!("mono/epi scan: {}", maxneg_text(&c.maxneg)),
            ],
            data: json!({
                "lh_is_e": c.lh_is_e,
                "hearts_are_e": c.hearts_are_e,
                "vleft_is_v": c.vleft_is_v,
                "regions_agree": c.regions_agree,
                "monos": maxneg_text(&c.monos),
                "maxneg": maxneg_text(&c.maxneg),
                "bound": c.bound,
                "consistent": c.consistent(),
            }),
        })
    }

    fn crosscheck(&mut self, e: &str) -> Result<Report> {
        let (u, cls) = self.universe(e)?;
        let r = completion_crosscheck(u, cls)?;
        let status = match &r.verdict {
            Verdict::Yes(_) => Status::Pass,
            Verdict::Unknown(_) => Status::Unknown,
            Verdict::No(_) => Status::Fail,
        };
        Ok(Report {
            query: String::new(),
            status,
            headline: format!("{} = {} generators, hom tables equal {}", r.lh_names.len(), r.r_names.len(), r.tables_equal()),
            body: vec![
                format!("LH^b: {}", r.lh_names.join(", ")),
                format!("images: {}", r.image_names.join(", ")),
                format!("R^b: {}", r.r_names.join(", ")),
                format!("verdict: {}", verdict_text(&r.verdict)),
            ],
            data: json!({
                "lh": r.lh_names,
                "images": r.image_names,
                "r": r.r_names,
                "bijective": r.bijective,
                "lh_table": r.lh_table,
                "image_table": r.image_table,
                "stalks_projective": r.stalks_projective,
                "verdict": verdict_json(&r.verdict),
            }),
        })
    }
}

fn degree_json(r: &DegreeReport) -> Value {
    let flags: BTreeMap<&str, &str> = FLAG_NAMES.iter().zip(r.flags().iter()).map(|(n, f)| (*n, f.label())).collect();
    json!({"degree": r.degree, "flags": flags})
}

/// Exit code for a batch: 1 on any failure, else 2 on any unknown, else 0.
pub fn exit_code(reports: &[Report]) -> i32 {
    match reports.iter().map(|r| r.status).max() {
        Some(Status::Fail) => 1,
        Some(Status::Unknown) => 2,
        _ => 0,
    }
}

pub fn render_text(reports: &[Report]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("> {}\n[{}] {}\n", r.query, r.status.word(), r.headline));
        for l in &r.body {
            out.push_str(&format!("  {l}\n"));
        }
    }
    out
}

pub fn render_json(reports: &[Report]) -> String {
    let items: Vec<Value> = reports
        .iter()
        .map(|r| json!({"query": r.query, "status": r.status.word(), "headline": r.headline, "data": r.data}))
        .collect();
    let doc = json!({"exit": exit_code(reports), "reports": items});
    let mut s = serde_json::to_string_pretty(&doc).expect("json");
    s.push('\n');
    s
}
