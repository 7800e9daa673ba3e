//! Report assembly: every analysis produces a JSON document (stable,
//! schema-tagged, byte-deterministic for a fixed command line) plus a
//! plain-text rendering of the same facts.

use serde_json::{json, Value};

use singclass::invariants::{
    adaptive_quotient_dim, jacobian_ideal_gens, m_power_times, InvariantKind, InvariantValue,
};
use singclass::stdbasis::QuotientDim;
use singclass::{
    classify_contact, classify_right, classify_univariate, contact_determinacy_bound,
    hessian_rank_corank, milnor_number, right_determinacy_bound, semicontinuity_scan,
    tjurina_basis_unfolding, tjurina_number, ClassLabel, DeterminacyBound, Error, FieldSpec,
    Polynomial, Result, ScanReport, UnivariateReport,
};

pub const SCHEMA: &str = "singclass/1";

/// Everything a subcommand needs besides the polynomial itself.
pub struct Ctx {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub cap: u32,
}

impl Ctx {
    pub fn field_name(&self) -> String {
        match self.field.characteristic() {
            0 => "Q".to_string(),
            p => format!("F_{p}"),
        }
    }

    fn input_json(&self, f: &Polynomial) -> Value {
        json!({
            "polynomial": f.render(&self.vars),
            "characteristic": self.field.characteristic(),
            "field": self.field_name(),
            "vars": self.vars,
            "truncate": self.cap,
        })
    }

    fn input_text(&self, f: &Polynomial) -> String {
        format!(
            "f = {}   over {} in {}",
            f.render(&self.vars),
            self.field_name(),
            self.vars.join(", ")
        )
    }
}

/// A finished report: one JSON value and one text block with the same
/// content.
pub struct Report {
    pub json: Value,
    pub text: String,
}

fn doc(command: &str, ctx: &Ctx, f: &Polynomial, body: Value) -> Value {
    let mut v = json!({
        "schema": SCHEMA,
        "command": command,
        "input": ctx.input_json(f),
    });
    let obj = v.as_object_mut().expect("doc is an object");
    for (k, val) in body.as_object().expect("body is an object") {
        obj.insert(k.clone(), val.clone());
    }
    v
}

fn invariant_json(v: &InvariantValue) -> Value {
    let kind = match v.kind {
        InvariantKind::Milnor => "milnor".to_string(),
        InvariantKind::Tjurina => "tjurina".to_string(),
        InvariantKind::HigherMilnor(k) => format!("milnor_{k}"),
        InvariantKind::HigherTjurina(k) => format!("tjurina_{k}"),
    };
    match v.value {
        QuotientDim::FiniteDim(d) => json!({"kind": kind, "status": "finite", "value": d}),
        QuotientDim::NotFiniteUpTo { bound, lower_bound } => json!({
            "kind": kind, "status": "not_finite_up_to", "bound": bound, "lower_bound": lower_bound,
        }),
    }
}

fn invariant_text(v: &InvariantValue) -> String {
    match v.value {
        QuotientDim::FiniteDim(d) => d.to_string(),
        QuotientDim::NotFiniteUpTo { bound, lower_bound } => {
            format!("not finite up to jet {bound} (dim >= {lower_bound})")
        }
    }
}

pub fn label_json(l: &ClassLabel) -> Value {
    json!({
        "label": l.to_string(),
        "family": format!("{:?}", l.family),
        "index": l.index,
        "variant": l.variant,
        "simple": l.is_simple(),
        "reason": l.reason,
    })
}

fn label_text(l: &ClassLabel) -> String {
    match &l.reason {
        Some(r) => format!("{l} ({r})"),
        None => l.to_string(),
    }
}

fn require_germ(f: &Polynomial) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::InvalidInput(
            "the zero polynomial has no invariants".into(),
        ));
    }
    Ok(f.order().finite().expect("nonzero polynomial"))
}

// ---------------------------------------------------------------- invariants

pub fn invariants_report(ctx: &Ctx, f: &Polynomial) -> Result<Report> {
    let ord = require_germ(f)?;
    let mu = milnor_number(f, ctx.cap)?;
    let tau = tjurina_number(f, ctx.cap)?;
    // The Hessian block is about the singularity structure; a smooth
    // germ (order 1) has none, but its invariants are still 0.
    let hess = (ord >= 2).then(|| hessian_rank_corank(f)).transpose()?;
    let hess_json = match &hess {
        Some(h) => json!({"rank": h.rank, "corank": h.corank}),
        None => Value::Null,
    };
    let hess_text = match &hess {
        Some(h) => format!("rank {}, corank {}", h.rank, h.corank),
        None => "- (smooth germ)".to_string(),
    };
    let json = doc(
        "invariants",
        ctx,
        f,
        json!({
            "order": ord,
            "mu": invariant_json(&mu),
            "tau": invariant_json(&tau),
            "hessian": hess_json,
        }),
    );
    let text = format!(
        "{}\norder    {}\nmu       {}\ntau      {}\nhessian  {}",
        ctx.input_text(f),
        ord,
        invariant_text(&mu),
        invariant_text(&tau),
        hess_text,
    );
    Ok(Report { json, text })
}

// ---------------------------------------------------------------- determinacy

/// The highcorner monomial of the certifying ideal (`m²·j(f)` for right
/// equivalence, `m·⟨f⟩ + m²·j(f)` for contact), rendered.
fn certifying_highcorner(ctx: &Ctx, f: &Polynomial, contact: bool) -> Option<String> {
    let mut gens = m_power_times(&jacobian_ideal_gens(f), 2);
    if contact {
        gens.extend(m_power_times(std::slice::from_ref(f), 1));
    }
    let (_, sb) = adaptive_quotient_dim(&gens, ctx.cap);
    sb.highcorner().map(|m| m.render(&ctx.vars))
}

fn bound_json(b: &DeterminacyBound, highcorner: &Option<String>) -> Value {
    json!({
        "highcorner": highcorner,
        "highcorner_degree": b.highcorner_degree,
        "k_star": b.k_star,
        "conservative": b.conservative,
        "example_reading": b.example_reading,
        "char0": b.char0,
        "mu_based": b.mu_based,
        "best": b.best(),
    })
}

fn bound_text(name: &str, b: &DeterminacyBound, highcorner: &Option<String>) -> String {
    let hc = highcorner.as_deref().unwrap_or("-");
    let char0 = match b.char0 {
        Some(c) => c.to_string(),
        None => "n/a".to_string(),
    };
    format!(
        "{name}: determined at jet {}\n  highcorner {hc} (degree {}), conservative {}, example reading {}, sharp {}, mu-based {}",
        b.best(),
        b.highcorner_degree,
        b.conservative,
        b.example_reading,
        char0,
        b.mu_based,
    )
}

pub fn determinacy_report(ctx: &Ctx, f: &Polynomial) -> Result<Report> {
    let ord = require_germ(f)?;
    let right = right_determinacy_bound(f, ctx.cap)?;
    let contact = contact_determinacy_bound(f, ctx.cap)?;
    let hc_right = certifying_highcorner(ctx, f, false);
    let hc_contact = certifying_highcorner(ctx, f, true);
    let json = doc(
        "determinacy",
        ctx,
        f,
        json!({
            "order": ord,
            "right": bound_json(&right, &hc_right),
            "contact": bound_json(&contact, &hc_contact),
        }),
    );
    let text = format!(
        "{}\norder {}\n{}\n{}",
        ctx.input_text(f),
        ord,
        bound_text("right", &right, &hc_right),
        bound_text("contact", &contact, &hc_contact),
    );
    Ok(Report { json, text })
}

// ---------------------------------------------------------------- split

pub fn split_report(ctx: &Ctx, f: &Polynomial) -> Result<Report> {
    require_germ(f)?;
    let bound = match singclass::right_determinacy_bound(f, ctx.cap) {
        Ok(b) => b.best().max(2),
        Err(_) => ctx.cap,
    };
    let s = singclass::split(f, bound)?;
    let residual = s.residual_in_corank_vars();
    let corank_vars: Vec<String> = ctx.vars.iter().skip(s.quad_rank).cloned().collect();
    let residual_str = if corank_vars.is_empty() {
        "0".to_string()
    } else {
        residual.render(&corank_vars)
    };
    let json = doc(
        "split",
        ctx,
        f,
        json!({
            "jet_bound": s.bound,
            "rank": s.quad_rank,
            "corank": s.corank(),
            "quadratic_part": s.quad_form.render(&ctx.vars),
            "residual": residual_str,
            "warnings": ["the split certifies the given jet level only"],
        }),
    );
    let text = format!(
        "{}\nrank {} / corank {}  (jet bound {})\nquadratic part: {}\nresidual:       {}",
        ctx.input_text(f),
        s.quad_rank,
        s.corank(),
        s.bound,
        s.quad_form.render(&ctx.vars),
        residual_str,
    );
    Ok(Report { json, text })
}

// ---------------------------------------------------------------- univariate

fn univariate_json(r: &UnivariateReport, ctx: &Ctx) -> Value {
    json!({
        "mult": r.mult,
        "e": r.e,
        "q": r.q,
        "k": r.k,
        "determinacy": r.determinacy,
        "mu": invariant_json(&r.mu),
        "modality": r.modality,
        "simple": r.simple,
        "normal_form": r.normal_form_hint.as_ref().map(|m| m.render(&ctx.vars)),
    })
}

fn univariate_text(r: &UnivariateReport, ctx: &Ctx) -> String {
    let nf = r
        .normal_form_hint
        .as_ref()
        .map(|m| m.render(&ctx.vars))
        .unwrap_or_else(|| "-".to_string());
    format!(
        "mult {} (q = {}, e = {}, k = {})\nright determinacy {}\nmu {}   modality {}   simple {}\nnormal form {}",
        r.mult, r.q, r.e, r.k, r.determinacy, invariant_text(&r.mu), r.modality, r.simple, nf,
    )
}

pub fn univariate_report(ctx: &Ctx, f: &Polynomial) -> Result<Report> {
    require_germ(f)?;
    let r = classify_univariate(f, ctx.cap)?;
    let json = doc("univariate", ctx, f, univariate_json(&r, ctx));
    let text = format!("{}\n{}", ctx.input_text(f), univariate_text(&r, ctx));
    Ok(Report { json, text })
}

// ---------------------------------------------------------------- classify

pub fn classify_report(ctx: &Ctx, f: &Polynomial) -> Result<Report> {
    let ord = require_germ(f)?;
    let mu = milnor_number(f, ctx.cap)?;
    let tau = tjurina_number(f, ctx.cap)?;
    let hess = (ord >= 2).then(|| hessian_rank_corank(f)).transpose()?;
    let contact_label = classify_contact(f, ctx.cap);
    let right_label = classify_right(f, ctx.cap);
    let mut warnings: Vec<String> = Vec::new();
    if contact_label.reason.is_some() {
        warnings.push(format!(
            "contact: {}",
            contact_label.reason.clone().unwrap_or_default()
        ));
    }
    if right_label.reason.is_some() {
        warnings.push(format!(
            "right: {}",
            right_label.reason.clone().unwrap_or_default()
        ));
    }

    let right_bound = right_determinacy_bound(f, ctx.cap).ok();
    let contact_bound = contact_determinacy_bound(f, ctx.cap).ok();
    let split_summary = match singclass::split(f, right_bound.as_ref().map_or(ctx.cap, |b| b.best().max(2))) {
        Ok(s) => {
            let corank_vars: Vec<String> = ctx.vars.iter().skip(s.quad_rank).cloned().collect();
            let residual = if corank_vars.is_empty() {
                "0".to_string()
            } else {
                s.residual_in_corank_vars().render(&corank_vars)
            };
            json!({
                "rank": s.quad_rank,
                "corank": s.corank(),
                "quadratic_part": s.quad_form.render(&ctx.vars),
                "residual": residual,
            })
        }
        Err(e) => {
            warnings.push(format!("split unavailable: {e}"));
            Value::Null
        }
    };
    let univariate = if f.nvars() == 1 && ctx.field.characteristic() > 0 {
        match classify_univariate(f, ctx.cap) {
            Ok(r) => univariate_json(&r, ctx),
            Err(e) => {
                warnings.push(format!("univariate analysis unavailable: {e}"));
                Value::Null
            }
        }
    } else {
        Value::Null
    };

    let json = doc(
        "classify",
        ctx,
        f,
        json!({
            "order": ord,
            "mu": invariant_json(&mu),
            "tau": invariant_json(&tau),
            "hessian": hess.as_ref().map_or(Value::Null, |h| json!({"rank": h.rank, "corank": h.corank})),
            "determinacy": {
                "right": right_bound.map(|b| b.best()),
                "contact": contact_bound.map(|b| b.best()),
            },
            "split": split_summary,
            "contact_label": label_json(&contact_label),
            "right_label": label_json(&right_label),
            "simple_contact": contact_label.is_simple(),
            "simple_right": right_label.is_simple(),
            "univariate": univariate,
            "warnings": warnings,
        }),
    );
    let corank_text = hess
        .as_ref()
        .map_or("-".to_string(), |h| h.corank.to_string());
    let mut text = format!(
        "{}\norder {}   mu {}   tau {}   corank {}\ncontact label: {}\nright label:   {}",
        ctx.input_text(f),
        ord,
        invariant_text(&mu),
        invariant_text(&tau),
        corank_text,
        label_text(&contact_label),
        label_text(&right_label),
    );
    for w in &warnings {
        text.push_str(&format!("\nwarning: {w}"));
    }
    Ok(Report { json, text })
}

// ---------------------------------------------------------------- deform-scan

pub fn deform_scan_report(
    ctx: &Ctx,
    f: &Polynomial,
    samples: u64,
    seed: u64,
) -> Result<Report> {
    require_germ(f)?;
    let unfolding = tjurina_basis_unfolding(f, ctx.cap)?;
    let scan: ScanReport = semicontinuity_scan(&unfolding, samples, seed, ctx.cap)?;
    let basis: Vec<String> = unfolding
        .basis()
        .iter()
        .map(|g| g.render(&ctx.vars))
        .collect();
    let json = doc(
        "deform-scan",
        ctx,
        f,
        json!({
            "nparams": unfolding.nparams(),
            "basis": basis,
            "seed": seed,
            "scan": serde_json::to_value(&scan).expect("scan serializes"),
        }),
    );
    let text = format!(
        "{}\nsemiuniversal unfolding with {} parameters: {}\nsamples {}   tau(base) {}   max tau observed {}   violations {}",
        ctx.input_text(f),
        unfolding.nparams(),
        basis.join(", "),
        scan.samples,
        scan.tau_base,
        scan.max_tau_observed,
        scan.violations.len(),
    );
    Ok(Report { json, text })
}

// ---------------------------------------------------------------- parse

pub fn parse_report(ctx: &Ctx, f: &Polynomial) -> Result<Report> {
    let json = doc(
        "parse",
        ctx,
        f,
        json!({
            "order": f.order().finite(),
            "degree": f.degree(),
            "terms": f.num_terms(),
        }),
    );
    Ok(Report {
        text: f.render(&ctx.vars),
        json,
    })
}

// ---------------------------------------------------------------- oracle

pub fn oracle_report(p: u64, nvars: usize, k: u32, contact: bool, vars: &[String]) -> Result<Report> {
    let space = singclass::enumerate_jets(p, nvars, k)?;
    let group = singclass::enumerate_group(p, nvars, k, contact)?;
    let table = singclass::orbit_decomposition(&space, &group)?;
    let orbits: Vec<Value> = table
        .orbits
        .iter()
        .map(|o| {
            json!({
                "rep": space.jet(o.representative).render(vars),
                "size": o.size,
                "tau": o.tau,
                "mu": o.mu,
            })
        })
        .collect();
    let json = json!({
        "schema": SCHEMA,
        "command": "oracle",
        "p": p,
        "n": nvars,
        "k": k,
        "action": if contact { "contact" } else { "right" },
        "group_order": group.order().to_string(),
        "jets": space.len(),
        "orbits": orbits,
    });
    let text = format!(
        "p = {p}, n = {nvars}, k = {k}, {} action: {} jets, {} orbits, group order {}",
        if contact { "contact" } else { "right" },
        space.len(),
        table.orbits.len(),
        group.order(),
    );
    Ok(Report { json, text })
}
