//! Scenario files: a block-structured text format and an equivalent JSON
//! form, both parsed into [`ScenarioFile`] before any algebra is built.
//!
//! ```text
//! base {
//!   basis 1:0, u:4
//!   unit 1
//!   mul x * y = xy
//!   d w = z
//!   contraction iota1 { t1 = 1 }
//! }
//! E {
//!   gen psi : 3
//!   d psi = u
//! }
//! Ehat { ... }
//! H = -1 * psi (x) u
//! Hhat = -1 * phat (x) u
//! F = 1 * psi^phat (x) 1
//! sections {
//!   v = X: 2 * iota1 ; C: psi[1]^dpsi[2] (x) t1
//! }
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::expr::{parse_sum, render_terms, Factor, Term};
use crate::algebra::{BaseElement, CdgaBuilder, FiniteCdga};
use crate::clifford::{parse_section, CliffordSection};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tduality::DualityScenario;
use crate::transgressive::{make_correspondence, OddGenerator, TcElement, TransgressiveModel};

/// Source position of an entry; ignored by serialization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub degree: u32,
}

/// `label = value`, used for differentials and contraction images.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Assign {
    pub label: String,
    pub value: String,
    #[serde(skip)]
    pub at: Loc,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub value: String,
    #[serde(skip)]
    pub at: Loc,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ContractionBlock {
    pub name: String,
    pub images: Vec<Assign>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BaseBlock {
    pub basis: Vec<BasisEntry>,
    pub unit: String,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    #[serde(default)]
    pub differential: Vec<Assign>,
    #[serde(default)]
    pub contractions: Vec<ContractionBlock>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub label: String,
    pub degree: u32,
    #[serde(default = "zero_text")]
    pub d: String,
    #[serde(skip)]
    pub at: Loc,
}

fn zero_text() -> String {
    "0".into()
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FibrationBlock {
    pub gens: Vec<GeneratorEntry>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct NamedSection {
    pub name: String,
    pub value: String,
    #[serde(skip)]
    pub at: Loc,
}

/// Syntactic content of a scenario file.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub base: BaseBlock,
    #[serde(rename = "E")]
    pub e: FibrationBlock,
    #[serde(rename = "Ehat")]
    pub ehat: FibrationBlock,
    #[serde(rename = "H")]
    pub h: String,
    #[serde(rename = "Hhat")]
    pub hhat: String,
    #[serde(rename = "F")]
    pub f: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<NamedSection>,
    #[serde(skip)]
    locs: [Loc; 3],
}

/// A parsed scenario with its named sections of the E-side algebroid.
#[derive(Clone, Debug)]
pub struct LoadedScenario {
    pub scenario: DualityScenario,
    pub sections: Vec<(String, CliffordSection)>,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn semantic(at: Loc, what: &str, text: &str, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Semantic(format!("line {}: {what} `{}`: {other}", at.line, text.trim())),
    }
}

enum Block {
    Top,
    Base,
    Contraction(usize),
    Fibration(bool),
    Sections,
}

/// Splits `lhs = rhs`, returning the trimmed parts and the column of `rhs`.
fn assignment(line: &str, col0: usize) -> Option<(&str, &str, usize)> {
    let (l, r) = line.split_once('=')?;
    let skipped = r.len() - r.trim_start().len();
    Some((l.trim(), r.trim(), col0 + l.chars().count() + 1 + r[..skipped].chars().count()))
}

impl ScenarioFile {
    /// Parses the text format, or JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| perr(e.line(), e.column(), e.to_string()));
        }
        let mut file = ScenarioFile::default();
        let mut block = Block::Top;
        let mut seen = [false; 3];
        let mut gen_d: [BTreeMap<String, (String, Loc)>; 2] = [BTreeMap::new(), BTreeMap::new()];
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            let col0 = content.chars().count() - content.trim_start().chars().count() + 1;
            if trimmed == "}" {
                block = match block {
                    Block::Contraction(_) => Block::Base,
                    Block::Top => return Err(perr(line_no, col0, "unmatched `}`")),
                    _ => Block::Top,
                };
                continue;
            }
            match block {
                Block::Top => {
                    if let Some(name) = trimmed.strip_suffix('{') {
                        block = match name.trim() {
                            "base" => Block::Base,
                            "E" => Block::Fibration(false),
                            "Ehat" => Block::Fibration(true),
                            "sections" => Block::Sections,
                            other => return Err(perr(line_no, col0, format!("unknown block `{other}`"))),
                        };
                        continue;
                    }
                    let (lhs, rhs, col) =
                        assignment(trimmed, col0).ok_or_else(|| perr(line_no, col0, "expected a block or `name = expression`"))?;
                    let slot = match lhs {
                        "H" => 0,
                        "Hhat" => 1,
                        "F" => 2,
                        other => return Err(perr(line_no, col0, format!("unknown entry `{other}`"))),
                    };
                    if seen[slot] {
                        return Err(perr(line_no, col0, format!("`{lhs}` given twice")));
                    }
                    seen[slot] = true;
                    let target = [&mut file.h, &mut file.hhat, &mut file.f];
                    *target.into_iter().nth(slot).unwrap() = rhs.to_string();
                    file.locs[slot] = Loc { line: line_no, col };
                }
                Block::Base => parse_base_line(&mut file.base, &mut block, trimmed, line_no, col0)?,
                Block::Contraction(k) => {
                    let (lhs, rhs, col) = assignment(trimmed, col0).ok_or_else(|| perr(line_no, col0, "expected `label = expression`"))?;
                    file.base.contractions[k].images.push(Assign {
                        label: lhs.into(),
                        value: rhs.into(),
                        at: Loc { line: line_no, col },
                    });
                }
                Block::Fibration(hat) => {
                    let side = if hat { &mut file.ehat } else { &mut file.e };
                    if let Some(rest) = trimmed.strip_prefix("gen ") {
                        let (label, deg) = rest.split_once(':').ok_or_else(|| perr(line_no, col0, "expected `gen label : degree`"))?;
                        let degree = deg.trim().parse().map_err(|_| perr(line_no, col0, format!("bad degree `{}`", deg.trim())))?;
                        side.gens.push(GeneratorEntry {
                            label: label.trim().into(),
                            degree,
                            d: zero_text(),
                            at: Loc { line: line_no, col: col0 },
                        });
                    } else if let Some(rest) = trimmed.strip_prefix("d ") {
                        let (lhs, rhs, col) = assignment(rest, col0 + 2).ok_or_else(|| perr(line_no, col0, "expected `d label = expression`"))?;
                        gen_d[hat as usize].insert(lhs.into(), (rhs.into(), Loc { line: line_no, col }));
                    } else {
                        return Err(perr(line_no, col0, "expected `gen` or `d`"));
                    }
                }
                Block::Sections => {
                    let (lhs, rhs, col) = assignment(trimmed, col0).ok_or_else(|| perr(line_no, col0, "expected `name = section`"))?;
                    file.sections.push(NamedSection { name: lhs.into(), value: rhs.into(), at: Loc { line: line_no, col } });
                }
            }
        }
        if !matches!(block, Block::Top) {
            return Err(perr(text.lines().count(), 1, "unterminated block"));
        }
        for (slot, name) in ["H", "Hhat", "F"].iter().enumerate() {
            if !seen[slot] {
                return Err(perr(text.lines().count().max(1), 1, format!("missing `{name}`")));
            }
        }
        for (hat, ds) in gen_d.into_iter().enumerate() {
            let side = if hat == 1 { &mut file.ehat } else { &mut file.e };
            for (label, (value, at)) in ds {
                let g = side.gens.iter_mut().find(|g| g.label == label).ok_or_else(|| {
                    Error::Semantic(format!("line {}: differential of undeclared generator `{label}`", at.line))
                })?;
                g.d = value;
                g.at = at;
            }
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario files serialize")
    }

    /// Builds the base algebra without checking its axioms.
    pub fn build_base(&self) -> Result<FiniteCdga> {
        self.base.build()
    }

    /// Builds and checks the whole scenario.
    pub fn build(&self) -> Result<LoadedScenario> {
        let base = self.build_base()?;
        let report = base.validate();
        if !report.is_valid() {
            return Err(Error::InvalidAlgebra(report.to_string()));
        }
        let base = Arc::new(base);
        let e = build_model(&base, &self.e)?;
        let ehat = build_model(&base, &self.ehat)?;
        let corr = make_correspondence(&e, &ehat)?;
        let [lh, lhh, lf] = self.locs;
        let h = parse_element(&e, &self.h, lh).map_err(|x| semantic(lh, "H", &self.h, x))?;
        let hhat = parse_element(&ehat, &self.hhat, lhh).map_err(|x| semantic(lhh, "Hhat", &self.hhat, x))?;
        let f = parse_element(corr.model(), &self.f, lf).map_err(|x| semantic(lf, "F", &self.f, x))?;
        let scenario = DualityScenario::from_correspondence(corr, h, hhat, f)?;
        let mut sections = Vec::new();
        for s in &self.sections {
            let v = parse_section(scenario.e(), &s.value, s.at.line).map_err(|x| semantic(s.at, "section", &s.value, x))?;
            sections.push((s.name.clone(), v));
        }
        Ok(LoadedScenario { scenario, sections })
    }

    fn base_block(base: &FiniteCdga) -> BaseBlock {
        let render_base = |a: &BaseElement| render_base_element(base, a);
        let basis = (0..base.dim()).map(|i| BasisEntry { label: base.label(i).into(), degree: base.degree(i) }).collect();
        let mut products: Vec<ProductEntry> = base
            .declared_products()
            .into_iter()
            .map(|(i, j, v)| ProductEntry { left: base.label(i).into(), right: base.label(j).into(), value: render_base(v), at: Loc::default() })
            .collect();
        for (i, j) in base.asymmetric_products() {
            products.push(ProductEntry {
                left: base.label(i).into(),
                right: base.label(j).into(),
                value: render_base(base.mul_basis(i, j)),
                at: Loc::default(),
            });
        }
        let differential = (0..base.dim())
            .filter(|&i| !base.d_basis(i).is_zero())
            .map(|i| Assign { label: base.label(i).into(), value: render_base(base.d_basis(i)), at: Loc::default() })
            .collect();
        let contractions = (0..base.contractions().len())
            .map(|k| ContractionBlock {
                name: base.contractions()[k].name.clone(),
                images: (0..base.dim())
                    .map(|i| (i, base.contract(k, &BaseElement::basis(i))))
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, v)| Assign { label: base.label(i).into(), value: render_base(&v), at: Loc::default() })
                    .collect(),
            })
            .collect();
        BaseBlock { basis, unit: base.label(base.unit()).into(), products, differential, contractions }
    }

    /// Syntactic form of a scenario, with optional named sections.
    pub fn from_scenario(s: &DualityScenario, sections: &[(String, CliffordSection)]) -> Self {
        let base = s.e().base();
        let render_base = |a: &BaseElement| render_base_element(base, a);
        let fib = |m: &TransgressiveModel| FibrationBlock {
            gens: m
                .generators()
                .iter()
                .map(|g| GeneratorEntry {
                    label: g.label.clone(),
                    degree: g.degree,
                    d: render_base(&g.transgression),
                    at: Loc::default(),
                })
                .collect(),
        };
        ScenarioFile {
            base: Self::base_block(base),
            e: fib(s.e()),
            ehat: fib(s.ehat()),
            h: super::render_element(s.e(), s.h()),
            hhat: super::render_element(s.ehat(), s.hhat()),
            f: super::render_element(s.correspondence().model(), s.f()),
            sections: sections
                .iter()
                .map(|(name, v)| NamedSection { name: name.clone(), value: v.render(s.e()), at: Loc::default() })
                .collect(),
            locs: Default::default(),
        }
    }

    /// The text format.
    pub fn render(&self) -> String {
        let mut out = String::from("base {\n");
        let b = &self.base;
        let basis: Vec<String> = b.basis.iter().map(|e| format!("{}:{}", e.label, e.degree)).collect();
        out += &format!("  basis {}\n  unit {}\n", basis.join(", "), b.unit);
        for p in &b.products {
            out += &format!("  mul {} * {} = {}\n", p.left, p.right, p.value);
        }
        for a in &b.differential {
            out += &format!("  d {} = {}\n", a.label, a.value);
        }
        for c in &b.contractions {
            out += &format!("  contraction {} {{\n", c.name);
            for a in &c.images {
                out += &format!("    {} = {}\n", a.label, a.value);
            }
            out += "  }\n";
        }
        out += "}\n";
        for (name, side) in [("E", &self.e), ("Ehat", &self.ehat)] {
            out += &format!("{name} {{\n");
            for g in &side.gens {
                out += &format!("  gen {} : {}\n", g.label, g.degree);
            }
            for g in &side.gens {
                if g.d != "0" {
                    out += &format!("  d {} = {}\n", g.label, g.d);
                }
            }
            out += "}\n";
        }
        out += &format!("H = {}\nHhat = {}\nF = {}\n", self.h, self.hhat, self.f);
        if !self.sections.is_empty() {
            out += "sections {\n";
            for s in &self.sections {
                out += &format!("  {} = {}\n", s.name, s.value);
            }
            out += "}\n";
        }
        out
    }
}

impl BaseBlock {
    /// Builds the algebra without checking its axioms.
    pub fn build(&self) -> Result<FiniteCdga> {
        let b = self;
        let mut builder = CdgaBuilder::new();
        for e in &b.basis {
            builder.basis(&e.label, e.degree);
        }
        builder.unit(&b.unit);
        let unit = builder.index(&b.unit)?;
        let lookup = |l: &str| builder.index(l).ok();
        let mut products = Vec::new();
        for p in &b.products {
            let v = base_expr(&p.value, p.at, &lookup, unit, None).map_err(|e| semantic(p.at, "product", &p.value, e))?;
            products.push((p.left.as_str(), p.right.as_str(), v, p.at));
        }
        let mut diffs = Vec::new();
        for a in &b.differential {
            let v = base_expr(&a.value, a.at, &lookup, unit, None).map_err(|e| semantic(a.at, "differential", &a.value, e))?;
            diffs.push((a.label.as_str(), v, a.at));
        }
        let mut contractions = Vec::new();
        for c in &b.contractions {
            let mut images = Vec::new();
            for a in &c.images {
                let v = base_expr(&a.value, a.at, &lookup, unit, None).map_err(|e| semantic(a.at, "contraction image", &a.value, e))?;
                images.push((a.label.as_str(), v));
            }
            contractions.push((c.name.as_str(), images));
        }
        for (l, r, v, at) in products {
            builder.product(l, r, v).map_err(|e| semantic(at, "product", &format!("{l} * {r}"), e))?;
        }
        for (l, v, at) in diffs {
            builder.differential(l, v).map_err(|e| semantic(at, "differential", l, e))?;
        }
        for (name, images) in contractions {
            builder.contraction(name, images)?;
        }
        builder.build()
    }
}

fn parse_base_line(base: &mut BaseBlock, block: &mut Block, line: &str, n: usize, col0: usize) -> Result<()> {
    let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
    let rest = rest.trim();
    match kw {
        "basis" => {
            for item in rest.split(',') {
                let (label, deg) = item.split_once(':').ok_or_else(|| perr(n, col0, format!("expected `label:degree`, got `{}`", item.trim())))?;
                let degree = deg.trim().parse().map_err(|_| perr(n, col0, format!("bad degree `{}`", deg.trim())))?;
                base.basis.push(BasisEntry { label: label.trim().into(), degree });
            }
        }
        "unit" => base.unit = rest.into(),
        "mul" => {
            let (lhs, rhs, col) = assignment(rest, col0 + 4).ok_or_else(|| perr(n, col0, "expected `mul a * b = expression`"))?;
            let (l, r) = lhs.split_once('*').ok_or_else(|| perr(n, col0, "expected `a * b` on the left"))?;
            base.products.push(ProductEntry { left: l.trim().into(), right: r.trim().into(), value: rhs.into(), at: Loc { line: n, col } });
        }
        "d" => {
            let (lhs, rhs, col) = assignment(rest, col0 + 2).ok_or_else(|| perr(n, col0, "expected `d a = expression`"))?;
            base.differential.push(Assign { label: lhs.into(), value: rhs.into(), at: Loc { line: n, col } });
        }
        "contraction" => {
            let (name, tail) = rest.split_once('{').ok_or_else(|| perr(n, col0, "expected `contraction name {`"))?;
            base.contractions.push(ContractionBlock { name: name.trim().into(), images: Vec::new() });
            let k = base.contractions.len() - 1;
            let tail = tail.trim();
            match tail.strip_suffix('}') {
                // single-line form `contraction iota { a = 1 }`
                Some(body) => {
                    for entry in body.split(';').filter(|s| !s.trim().is_empty()) {
                        let (l, r, col) = assignment(entry, col0).ok_or_else(|| perr(n, col0, "expected `label = expression`"))?;
                        base.contractions[k].images.push(Assign { label: l.into(), value: r.into(), at: Loc { line: n, col } });
                    }
                }
                None if tail.is_empty() => *block = Block::Contraction(k),
                None => return Err(perr(n, col0, "expected `}`")),
            }
        }
        other => return Err(perr(n, col0, format!("unknown base entry `{other}`"))),
    }
    Ok(())
}

fn build_model(base: &Arc<FiniteCdga>, block: &FibrationBlock) -> Result<TransgressiveModel> {
    let lookup = |l: &str| base.index_of(l);
    let mut gens = Vec::new();
    for g in &block.gens {
        let c = base_expr(&g.d, g.at, &lookup, base.unit(), Some(base))
            .map_err(|e| semantic(g.at, &format!("transgression of {}", g.label), &g.d, e))?;
        gens.push(OddGenerator::new(&g.label, g.degree, c));
    }
    TransgressiveModel::new(base.clone(), gens).map_err(|e| {
        let text = block.gens.iter().map(|g| format!("d {} = {}", g.label, g.d)).collect::<Vec<_>>().join("; ");
        semantic(block.gens.first().map_or(Loc::default(), |g| g.at), "fibration", &text, e)
    })
}

fn base_factors(t: &Term, lookup: &dyn Fn(&str) -> Option<usize>, at: Loc) -> Result<Vec<usize>> {
    t.factors
        .iter()
        .map(|f| match f {
            Factor::Label(l) => lookup(l).ok_or_else(|| Error::UnknownLabel(l.clone())),
            _ => Err(perr(at.line, t.col, "unexpected operator in a form")),
        })
        .collect()
}

fn base_product(idx: &[usize], unit: usize, base: Option<&FiniteCdga>) -> Result<BaseElement> {
    match (idx, base) {
        ([], _) => Ok(BaseElement::basis(unit)),
        ([i], _) => Ok(BaseElement::basis(*i)),
        (_, Some(b)) => Ok(idx[1..].iter().fold(BaseElement::basis(idx[0]), |acc, &i| b.mul(&acc, &BaseElement::basis(i)))),
        (_, None) => Err(Error::Semantic("products of basis labels are not available inside the base block".into())),
    }
}

fn base_expr(text: &str, at: Loc, lookup: &dyn Fn(&str) -> Option<usize>, unit: usize, base: Option<&FiniteCdga>) -> Result<BaseElement> {
    let mut out = BaseElement::zero();
    for t in parse_sum(text, at.line, at.col)? {
        let idx = base_factors(&t, lookup, at)?;
        out.add_scaled(&base_product(&idx, unit, base)?, &t.coef);
    }
    Ok(out)
}

/// Parses `q * g1^g2 (x) b + ...` against a model: generator labels first,
/// then base labels, which are multiplied. A term without base labels has
/// the unit as coefficient.
pub fn parse_element(model: &TransgressiveModel, text: &str, at: Loc) -> Result<TcElement> {
    let base = model.base();
    let mut out = TcElement::zero();
    for t in parse_sum(text, at.line, at.col)? {
        let mut x = model.one();
        let mut rest = t.factors.as_slice();
        while let [Factor::Label(l), tail @ ..] = rest {
            match model.gen_index(l) {
                Some(i) => x = model.wedge(&x, &model.generator(i)),
                None => break,
            }
            rest = tail;
        }
        let tail = Term { coef: Scalar::one(), factors: rest.to_vec(), col: t.col };
        let idx = base_factors(&tail, &|l| base.index_of(l), at).map_err(|e| match e {
            Error::UnknownLabel(l) if model.gen_index(&l).is_none() => Error::UnknownLabel(l),
            Error::UnknownLabel(l) => perr(at.line, t.col, format!("generator `{l}` after a base label")),
            other => other,
        })?;
        let b = base_product(&idx, base.unit(), Some(base))?;
        out.add_scaled(&model.wedge(&x, &model.from_base(&b)), &t.coef);
    }
    Ok(out)
}

/// Parses a sum of products of base labels.
pub fn parse_base_element(base: &FiniteCdga, text: &str, at: Loc) -> Result<BaseElement> {
    base_expr(text, at, &|l| base.index_of(l), base.unit(), Some(base))
}

/// Base-block form of an algebra.
pub fn base_block(base: &FiniteCdga) -> BaseBlock {
    ScenarioFile::base_block(base)
}

fn render_base_element(base: &FiniteCdga, a: &BaseElement) -> String {
    render_terms(a.terms().map(|(i, q)| (q.clone(), None, base.label(i).to_string())))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = "\
# S^7 over S^4 twice
base {
  basis 1:0, u:4
  unit 1
}
E {
  gen psi : 3
  d psi = u
}
Ehat {
  gen phat : 3
  d phat = u
}
H = -psi (x) u
Hhat = -phat (x) u
F = psi^phat
";

    #[test]
    fn parses_and_checks() {
        let s = ScenarioFile::parse(HOPF).unwrap().build().unwrap().scenario;
        assert!(s.check().unwrap().is_t_dual());
        assert_eq!(s.f(), &TcElement::term(0b11, 0, Scalar::one()));
    }

    #[test]
    fn text_and_json_round_trip() {
        let s = ScenarioFile::parse(HOPF).unwrap().build().unwrap().scenario;
        let text = ScenarioFile::from_scenario(&s, &[]).render();
        let again = ScenarioFile::parse(&text).unwrap().build().unwrap().scenario;
        assert_eq!(again, s);
        assert_eq!(ScenarioFile::from_scenario(&again, &[]).render(), text);
        assert_eq!(again.f(), s.f());
        let json = ScenarioFile::from_scenario(&s, &[]).to_json();
        let from_json = ScenarioFile::parse(&json).unwrap().build().unwrap().scenario;
        assert_eq!(ScenarioFile::from_scenario(&from_json, &[]).render(), text);
    }

    #[test]
    fn syntax_errors_have_positions() {
        let bad = HOPF.replace("H = -psi (x) u", "H = -psi (x) u $");
        match ScenarioFile::parse(&bad).unwrap().build() {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (14, 16)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(ScenarioFile::parse("base {\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn mixed_degree_transgression_is_semantic_error() {
        let bad = HOPF.replace("basis 1:0, u:4", "basis 1:0, u:4, theta1:1").replace("d psi = u", "d psi = u + theta1");
        let err = ScenarioFile::parse(&bad).unwrap().build().unwrap_err();
        match err {
            Error::Semantic(msg) => assert!(msg.contains("u + theta1"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_label_is_reported() {
        let bad = HOPF.replace("F = psi^phat", "F = psi^zz");
        assert!(matches!(ScenarioFile::parse(&bad).unwrap().build(), Err(Error::Semantic(_))));
    }
}
