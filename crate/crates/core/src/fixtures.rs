//! Bundled scenarios and the parameter sets of the constructive recipes.
//!
//! Most bundled files are the rendered output of a [`Recipe`]; the sync
//! test keeps the two from drifting apart.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{BaseElement, CdgaBuilder, FiniteCdga};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::scenario::{base_block, parse_base_element, parse_element, BaseBlock, GeneratorEntry, LoadedScenario, Loc, ScenarioFile};
use crate::tduality::{
    construct_frame_dual_i, construct_frame_dual_ii, construct_from_relation, construct_multidegree_frame_dual,
    construct_sphere_dual, DualityScenario,
};
use crate::transgressive::{make_partial_frame_model, OddGenerator, TcElement, TransgressiveModel};

const FILES: [(&str, &str); 9] = [
    ("hopf_s4", include_str!("../fixtures/hopf_s4.scn")),
    ("sphere_multidegree", include_str!("../fixtures/sphere_multidegree.scn")),
    ("frame_rank2", include_str!("../fixtures/frame_rank2.scn")),
    ("partial_frame", include_str!("../fixtures/partial_frame.scn")),
    ("relation_dual", include_str!("../fixtures/relation_dual.scn")),
    ("multidegree_frame", include_str!("../fixtures/multidegree_frame.scn")),
    ("t4_usual", include_str!("../fixtures/t4_usual.scn")),
    ("t4_self_dual", include_str!("../fixtures/t4_self_dual.scn")),
    ("broken", include_str!("../fixtures/broken.scn")),
];

/// Names of all bundled scenarios.
pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}

/// Bundled scenarios that are T-dual pairs.
pub fn positive() -> impl Iterator<Item = &'static str> {
    names().filter(|&n| n != "broken")
}

/// Text of a bundled scenario; a trailing `.scn` is ignored.
pub fn text(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".scn").unwrap_or(name);
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn load(name: &str) -> Result<LoadedScenario> {
    let t = text(name).ok_or_else(|| Error::UnknownLabel(format!("no bundled scenario `{name}`")))?;
    ScenarioFile::parse(t)?.build()
}

/// Input of one constructive recipe, in the JSON form accepted by
/// `tdual construct --params`. Forms are written in the scenario grammar;
/// multipliers are rational literals such as `"-1/2"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "kebab-case")]
pub enum Recipe {
    /// Twist `h` is written over the frame model with generators
    /// `psi1, psi3, …`.
    FrameI { base: BaseBlock, chern: Vec<String>, h: String, lambda: Vec<String> },
    FrameIi {
        base: BaseBlock,
        chern: Vec<String>,
        h: String,
        k: usize,
        lambda: Vec<String>,
        #[serde(default)]
        extra_chern: Vec<String>,
    },
    Relation { base: BaseBlock, chern: Vec<String>, chern_hat: Vec<String>, lambda: Vec<String>, k: usize, h: String },
    MultidegreeFrame { base: BaseBlock, chern: Vec<String>, chern_hat: Vec<String>, k: usize, h: Vec<String> },
    Sphere { base: BaseBlock, generator: GeneratorEntry, h: String, euler_hat: String, dual_degree: u32 },
}

pub const RECIPES: [&str; 5] = ["frame-i", "frame-ii", "relation", "multidegree-frame", "sphere"];

fn build_base(block: &BaseBlock) -> Result<Arc<FiniteCdga>> {
    let base = block.build()?;
    let report = base.validate();
    if !report.is_valid() {
        return Err(Error::InvalidAlgebra(report.to_string()));
    }
    Ok(Arc::new(base))
}

fn forms(base: &FiniteCdga, texts: &[String]) -> Result<Vec<BaseElement>> {
    texts.iter().map(|t| parse_base_element(base, t, Loc::default())).collect()
}

fn scalars(texts: &[String]) -> Result<Vec<Scalar>> {
    texts
        .iter()
        .map(|t| scalar::parse(t.trim()).ok_or_else(|| Error::Semantic(format!("bad multiplier `{t}`"))))
        .collect()
}

impl Recipe {
    pub fn name(&self) -> &'static str {
        match self {
            Recipe::FrameI { .. } => "frame-i",
            Recipe::FrameIi { .. } => "frame-ii",
            Recipe::Relation { .. } => "relation",
            Recipe::MultidegreeFrame { .. } => "multidegree-frame",
            Recipe::Sphere { .. } => "sphere",
        }
    }

    /// Parses parameters for `recipe` from a JSON object; a `recipe` field
    /// in the object, if present, must agree.
    pub fn from_json(recipe: &str, json: &str) -> Result<Self> {
        let mut v: serde_json::Value =
            serde_json::from_str(json).map_err(|e| Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() })?;
        let obj = v.as_object_mut().ok_or_else(|| Error::Semantic("parameters must be a JSON object".into()))?;
        match obj.get("recipe").and_then(|r| r.as_str()) {
            Some(r) if r != recipe => return Err(Error::Semantic(format!("parameters are for `{r}`, not `{recipe}`"))),
            _ => {}
        }
        obj.insert("recipe".into(), recipe.into());
        serde_json::from_value(v).map_err(|e| Error::Semantic(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("recipes serialize")
    }

    /// The parameter set behind the bundled fixture of each recipe.
    pub fn bundled(recipe: &str) -> Option<Recipe> {
        let name = match recipe {
            "frame-i" => "frame_rank2",
            "frame-ii" => "partial_frame",
            "relation" => "relation_dual",
            "multidegree-frame" => "multidegree_frame",
            "sphere" => "sphere_multidegree",
            _ => return None,
        };
        fixture_recipe(name)
    }

    pub fn run(&self) -> Result<DualityScenario> {
        match self {
            Recipe::FrameI { base, chern, h, lambda } => {
                let base = build_base(base)?;
                let chern = forms(&base, chern)?;
                let e = make_partial_frame_model(base.clone(), &chern, chern.len())?;
                let h = parse_element(&e, h, Loc::default())?;
                construct_frame_dual_i(base, &chern, &h, &scalars(lambda)?)
            }
            Recipe::FrameIi { base, chern, h, k, lambda, extra_chern } => {
                let base = build_base(base)?;
                let chern = forms(&base, chern)?;
                let e = make_partial_frame_model(base.clone(), &chern, chern.len())?;
                let h = parse_element(&e, h, Loc::default())?;
                let extra = forms(&base, extra_chern)?;
                construct_frame_dual_ii(base, &chern, &h, *k, &scalars(lambda)?, &extra)
            }
            Recipe::Relation { base, chern, chern_hat, lambda, k, h } => {
                let base = build_base(base)?;
                let h = parse_base_element(&base, h, Loc::default())?;
                construct_from_relation(base.clone(), &forms(&base, chern)?, &forms(&base, chern_hat)?, &scalars(lambda)?, *k, &h)
            }
            Recipe::MultidegreeFrame { base, chern, chern_hat, k, h } => {
                let base = build_base(base)?;
                construct_multidegree_frame_dual(base.clone(), &forms(&base, chern)?, &forms(&base, chern_hat)?, *k, &forms(&base, h)?)
            }
            Recipe::Sphere { base, generator, h, euler_hat, dual_degree } => {
                let base = build_base(base)?;
                let c = parse_base_element(&base, &generator.d, Loc::default())?;
                let e = TransgressiveModel::new(base.clone(), vec![OddGenerator::new(&generator.label, generator.degree, c)])?;
                let h = parse_element(&e, h, Loc::default())?;
                let eh = parse_base_element(&base, euler_hat, Loc::default())?;
                construct_sphere_dual(&e, &h, &eh, *dual_degree)
            }
        }
    }
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn s2xs2() -> FiniteCdga {
    let mut b = CdgaBuilder::new();
    for (l, d) in [("1", 0), ("x", 2), ("y", 2), ("xy", 4)] {
        b.basis(l, d);
    }
    b.unit("1");
    b.product("x", "y", BaseElement::basis(3)).expect("labels exist");
    b.build().expect("S2 x S2")
}

fn s2xs4() -> FiniteCdga {
    let mut b = CdgaBuilder::new();
    for (l, d) in [("1", 0), ("a", 2), ("b", 4), ("ab", 6)] {
        b.basis(l, d);
    }
    b.unit("1");
    b.product("a", "b", BaseElement::basis(3)).expect("labels exist");
    b.build().expect("S2 x S4")
}

/// `x y = z` with `z` exact: `d w = z`.
fn killed_product() -> FiniteCdga {
    let mut b = CdgaBuilder::new();
    for (l, d) in [("1", 0), ("x", 2), ("y", 2), ("w", 3), ("z", 4)] {
        b.basis(l, d);
    }
    b.unit("1");
    b.product("x", "y", BaseElement::basis(4)).expect("labels exist");
    b.differential("w", BaseElement::basis(4)).expect("labels exist");
    b.build().expect("relation base")
}

fn fixture_recipe(name: &str) -> Option<Recipe> {
    Some(match name {
        "sphere_multidegree" => Recipe::Sphere {
            base: base_block(&s2xs4()),
            generator: GeneratorEntry { label: "psi".into(), degree: 3, d: "0".into(), at: Loc::default() },
            h: "psi (x) a + psi (x) ab".into(),
            euler_hat: "a".into(),
            dual_degree: 1,
        },
        "frame_rank2" => Recipe::FrameI {
            base: base_block(&s2xs2()),
            chern: strings(&["x", "xy"]),
            h: "psi1 (x) xy + psi3 (x) y".into(),
            lambda: strings(&["2", "-3"]),
        },
        "partial_frame" => Recipe::FrameIi {
            base: base_block(&s2xs4()),
            chern: strings(&["a", "b"]),
            h: "psi1 (x) ab + psi3 (x) b".into(),
            k: 1,
            lambda: strings(&["1/2", "3"]),
            extra_chern: strings(&["0"]),
        },
        "relation_dual" => Recipe::Relation {
            base: base_block(&killed_product()),
            chern: strings(&["x"]),
            chern_hat: strings(&["y"]),
            lambda: strings(&["1"]),
            k: 1,
            h: "-w".into(),
        },
        "multidegree_frame" => Recipe::MultidegreeFrame {
            base: base_block(&killed_product()),
            chern: strings(&["x"]),
            chern_hat: strings(&["y"]),
            k: 1,
            h: strings(&["-w"]),
        },
        _ => return None,
    })
}

fn s4() -> Arc<FiniteCdga> {
    let mut b = CdgaBuilder::new();
    b.basis("1", 0);
    b.basis("u", 4);
    b.unit("1");
    Arc::new(b.build().expect("S4"))
}

/// S^7 → S^4 paired with itself: `H = −ψu`, `F = ψψ̂`.
fn hopf_s4() -> Result<DualityScenario> {
    let base = s4();
    let u = BaseElement::basis(1);
    let e = TransgressiveModel::new(base.clone(), vec![OddGenerator::new("psi", 3, u.clone())])?;
    let ehat = TransgressiveModel::new(base, vec![OddGenerator::new("phat", 3, u.clone())])?;
    let h = TcElement::monomial(1, u.neg());
    let hhat = h.clone();
    DualityScenario::new(e, h, ehat, hhat, TcElement::term(0b11, 0, scalar::one()))
}

/// Chern classes of the four circles of the T^4 bundle over T^2.
fn t4_models() -> Result<(Arc<FiniteCdga>, TransgressiveModel)> {
    let base = Arc::new(FiniteCdga::torus(2, "theta"));
    let vol = base.index_of("theta1theta2").expect("torus volume");
    let gens = [1, -1, 2, 0]
        .iter()
        .enumerate()
        .map(|(i, &m)| OddGenerator::new(&format!("psi{}", i + 1), 1, BaseElement::term(vol, scalar::int(m))))
        .collect();
    let e = TransgressiveModel::new(base.clone(), gens)?;
    Ok((base, e))
}

/// The T^4 bundle with `H = 0` against four trivial 3-spheres carrying
/// `Ĥ = Σ c_i ψ̂_i`, kernel `F = −Σ ψ_i ψ̂_i`.
fn t4_usual() -> Result<DualityScenario> {
    let (base, e) = t4_models()?;
    let gens = (1..=4).map(|i| OddGenerator::new(&format!("phat{i}"), 3, BaseElement::zero())).collect();
    let ehat = TransgressiveModel::new(base, gens)?;
    let mut hhat = TcElement::zero();
    let mut f = TcElement::zero();
    for i in 0..4 {
        hhat.add_coefficient(1 << i, &e.gen(i).transgression, &scalar::one());
        f.add_term((1 << i) | (1 << (4 + i)), 0, -scalar::one());
    }
    DualityScenario::new(e, TcElement::zero(), ehat, hhat, f)
}

/// The T^4 bundle as its own dual with `F = Π (ψ_i − ψ̂_i)`.
fn t4_self_dual() -> Result<DualityScenario> {
    let (base, e) = t4_models()?;
    let gens = e.generators().iter().map(|g| OddGenerator::new(&g.label.replace("psi", "phat"), 1, g.transgression.clone())).collect();
    let ehat = TransgressiveModel::new(base, gens)?;
    let corr = crate::transgressive::make_correspondence(&e, &ehat)?;
    let m = corr.model();
    let factors: Vec<TcElement> = (0..4).map(|i| m.generator(i).sub(&m.generator(4 + i))).collect();
    let f = m.wedge_all(&factors);
    DualityScenario::from_correspondence(corr, TcElement::zero(), TcElement::zero(), f)
}

/// `hopf_s4` with `F = 2ψψ̂`, which breaks the gerbe condition.
fn broken() -> Result<DualityScenario> {
    let s = hopf_s4()?;
    let f = s.f().scale(&scalar::int(2));
    DualityScenario::new(s.e().clone(), s.h().clone(), s.ehat().clone(), s.hhat().clone(), f)
}

/// Rebuilds a bundled scenario from its defining construction.
pub fn generate(name: &str) -> Result<DualityScenario> {
    if let Some(r) = fixture_recipe(name) {
        return r.run();
    }
    match name {
        "hopf_s4" => hopf_s4(),
        "t4_usual" => t4_usual(),
        "t4_self_dual" => t4_self_dual(),
        "broken" => broken(),
        _ => Err(Error::UnknownLabel(format!("no bundled scenario `{name}`"))),
    }
}

/// Header comment and rendered text of a generated fixture.
pub fn render_fixture(name: &str) -> Result<String> {
    let s = generate(name)?;
    Ok(format!("# {name}\n{}", ScenarioFile::from_scenario(&s, &[]).render()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_match_generators() {
        // TDUAL_BLESS=1 rewrites the files
        let bless = std::env::var_os("TDUAL_BLESS").is_some();
        for name in names() {
            let expected = render_fixture(name).unwrap();
            if bless {
                let path = format!("{}/fixtures/{name}.scn", env!("CARGO_MANIFEST_DIR"));
                std::fs::write(path, &expected).unwrap();
                continue;
            }
            assert_eq!(text(name).unwrap(), expected, "{name} is out of date");
            assert_eq!(load(name).unwrap().scenario, generate(name).unwrap(), "{name}");
        }
    }

    #[test]
    fn positive_fixtures_are_dual_and_broken_is_not() {
        for name in positive() {
            let s = load(name).unwrap().scenario;
            assert!(s.check().unwrap().is_t_dual(), "{name}");
        }
        let s = load("broken.scn").unwrap().scenario;
        assert!(!s.check_gerbe_trivialization().holds);
    }

    #[test]
    fn recipe_params_round_trip_through_json() {
        for r in RECIPES {
            let recipe = Recipe::bundled(r).unwrap();
            let again = Recipe::from_json(r, &recipe.to_json()).unwrap();
            assert_eq!(again.run().unwrap(), recipe.run().unwrap());
        }
        let json = Recipe::bundled("sphere").unwrap().to_json();
        assert!(Recipe::from_json("relation", &json).is_err());
    }
}
