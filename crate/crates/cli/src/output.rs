use serde::Serialize;
use serde_json::json;

use perfiso::isometry::{build_mu, Verdict};
use perfiso::pigroup::{AffineCoords, PIGroupReport};
use perfiso::{CharTable, CycInt, Prime, SignedIsometry};

use crate::Format;

/// Version of every JSON document the CLI prints.
pub const SCHEMA: u32 = 1;

pub struct Output {
    format: Format,
    p: Prime,
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema: u32,
    #[serde(flatten)]
    body: &'a T,
}

fn print_json<T: Serialize>(body: &T) {
    let doc = Versioned {
        schema: SCHEMA,
        body,
    };
    println!("{}", serde_json::to_string(&doc).expect("serializable"));
}

fn symbolic(rows: &[Vec<CycInt>]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(CycInt::symbolic).collect())
        .collect()
}

fn coeffs(rows: &[Vec<CycInt>]) -> Vec<Vec<Vec<i64>>> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.coeffs().to_vec()).collect())
        .collect()
}

impl Output {
    pub fn new(format: Format, p: Prime) -> Self {
        Output { format, p }
    }

    pub fn chartab(&self, table: &CharTable) {
        match self.format {
            Format::Text => print!("{}", table.render_text()),
            Format::Json => print_json(&table.to_json()),
        }
    }

    pub fn mu(&self, iso: &SignedIsometry) {
        let mu = build_mu(iso);
        match self.format {
            Format::Text => print!("{}", mu.render_text()),
            Format::Json => print_json(&json!({
                "p": self.p.get(),
                "map": iso.to_string(),
                "entries": symbolic(mu.rows()),
                "coeffs": coeffs(mu.rows()),
            })),
        }
    }

    pub fn check(&self, iso: &SignedIsometry, verdict: &Verdict, spaces: &Verdict) {
        match self.format {
            Format::Text => {
                println!("map: {iso}");
                println!("sign: {}", iso.sign_profile());
                println!("verdict: {verdict}");
                println!("spaces: {spaces}");
            }
            Format::Json => print_json(&json!({
                "p": self.p.get(),
                "map": iso.to_string(),
                "sign_profile": iso.sign_profile(),
                "verdict": verdict,
                "spaces_verdict": spaces,
            })),
        }
    }

    pub fn decompose(&self, iso: &SignedIsometry, c: &AffineCoords) {
        match self.format {
            Format::Text => println!("{c}"),
            Format::Json => print_json(&json!({
                "p": self.p.get(),
                "map": iso.to_string(),
                "eps": c.eps,
                "a": c.a,
                "u": c.u,
            })),
        }
    }

    pub fn not_perfect(&self, iso: &SignedIsometry, why: &str) {
        match self.format {
            Format::Text => println!("NotPerfect: {iso}: {why}"),
            Format::Json => print_json(&json!({
                "p": self.p.get(),
                "map": iso.to_string(),
                "error": "not_perfect",
                "detail": why,
            })),
        }
    }

    pub fn report(&self, report: &PIGroupReport) {
        match self.format {
            Format::Json => print_json(report),
            Format::Text => print!("{}", render_report(report)),
        }
    }
}

fn render_report(r: &PIGroupReport) -> String {
    let p = Prime::new(r.p).expect("report prime");
    let mut out = format!("p = {}\norder = {}\n", r.p, r.order);
    out.push_str("elements (eps, a, u):\n");
    for c in &r.elements {
        out.push_str(&format!("  {:<18} {}\n", c.to_string(), c.to_isometry(p)));
    }
    if !r.non_affine.is_empty() {
        out.push_str("non-affine perfect isometries:\n");
        for lit in &r.non_affine {
            out.push_str(&format!("  {lit}\n"));
        }
    }
    out.push_str("checks:\n");
    for (name, value) in r.checks.named() {
        if let Some(ok) = value {
            out.push_str(&format!("  {name}: {}\n", if ok { "pass" } else { "FAIL" }));
        }
    }
    if let Some(seed) = r.seed {
        out.push_str(&format!("seed = {seed}\n"));
    }
    for f in &r.failures {
        out.push_str(&format!("failure [{}]: {}\n", f.check, f.detail));
    }
    out
}
