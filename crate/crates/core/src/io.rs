//! Versioned JSON documents for kernels and plans.
//!
//! Complex values are stored as separate real and imaginary arrays.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::construct::ConstructionRecipe;
use crate::error::{Error, Result};
use crate::frame::{PeriodicPlan, SamplingPlan};
use crate::group::{FiniteGroup, GroupIndex};
use crate::spectral::Kernel;

pub const SCHEMA: &str = "dynsamp/1";

fn schema() -> String {
    SCHEMA.to_string()
}

fn check_schema(s: &str) -> Result<()> {
    if s == SCHEMA {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "unsupported schema {s:?}, expected {SCHEMA:?}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelFile {
    #[serde(default = "schema")]
    pub schema: String,
    pub factors: Vec<usize>,
    pub symbol_re: Vec<f64>,
    #[serde(default)]
    pub symbol_im: Vec<f64>,
}

impl KernelFile {
    pub fn from_kernel(k: &Kernel) -> Self {
        KernelFile {
            schema: schema(),
            factors: k.group().factors().to_vec(),
            symbol_re: k.symbol().iter().map(|z| z.re).collect(),
            symbol_im: k.symbol().iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_kernel(&self) -> Result<Kernel> {
        check_schema(&self.schema)?;
        let g = FiniteGroup::new(&self.factors)?;
        let im = if self.symbol_im.is_empty() {
            vec![0.0; self.symbol_re.len()]
        } else {
            self.symbol_im.clone()
        };
        if im.len() != self.symbol_re.len() {
            return Err(Error::LengthMismatch {
                expected: self.symbol_re.len(),
                found: im.len(),
            });
        }
        let sym: Vec<Complex64> = self
            .symbol_re
            .iter()
            .zip(&im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        if sym.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Kernel::from_symbol(g, sym)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicSpec {
    pub m: usize,
    pub w: Vec<Vec<usize>>,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    #[serde(default = "schema")]
    pub schema: String,
    pub factors: Vec<usize>,
    pub omega: Vec<Vec<usize>>,
    pub depths: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<ConstructionRecipe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<PeriodicSpec>,
}

impl PlanFile {
    pub fn from_plan(plan: &SamplingPlan) -> Self {
        let g = plan.group();
        let (omega, depths) = plan.entries().map(|(i, l)| (g.index(i).0, l)).unzip();
        PlanFile {
            schema: schema(),
            factors: g.factors().to_vec(),
            omega,
            depths,
            recipe: None,
            periodic: None,
        }
    }

    pub fn from_periodic(plan: &PeriodicPlan) -> Self {
        let mut f = Self::from_plan(&plan.induced_plan());
        f.periodic = Some(PeriodicSpec {
            m: plan.m(),
            w: plan.w().into_iter().map(|r| r.0).collect(),
            depth: plan.depth(),
        });
        f
    }

    pub fn with_recipe(mut self, recipe: ConstructionRecipe) -> Self {
        self.recipe = Some(recipe);
        self
    }

    pub fn to_plan(&self) -> Result<SamplingPlan> {
        check_schema(&self.schema)?;
        if self.omega.len() != self.depths.len() {
            return Err(Error::LengthMismatch {
                expected: self.omega.len(),
                found: self.depths.len(),
            });
        }
        let g = FiniteGroup::new(&self.factors)?;
        let entries: Vec<(GroupIndex, usize)> = self
            .omega
            .iter()
            .cloned()
            .map(GroupIndex)
            .zip(self.depths.iter().copied())
            .collect();
        SamplingPlan::from_indices(g, &entries)
    }

    pub fn to_periodic(&self) -> Result<Option<PeriodicPlan>> {
        check_schema(&self.schema)?;
        let Some(p) = &self.periodic else {
            return Ok(None);
        };
        let g = FiniteGroup::new(&self.factors)?;
        let w: Vec<GroupIndex> = p.w.iter().cloned().map(GroupIndex).collect();
        let plan = PeriodicPlan::new(g, p.m, &w, Some(p.depth))?;
        if plan.induced_plan() != self.to_plan()? {
            return Err(Error::InvalidPlan(
                "omega does not match the periodic description".into(),
            ));
        }
        Ok(Some(plan))
    }
}

pub fn kernel_to_json(k: &Kernel) -> String {
    serde_json::to_string_pretty(&KernelFile::from_kernel(k)).expect("serializable")
}

pub fn kernel_from_json(s: &str) -> Result<Kernel> {
    serde_json::from_str::<KernelFile>(s)
        .map_err(|e| Error::InvalidArgument(format!("kernel JSON: {e}")))?
        .to_kernel()
}

pub fn plan_to_json(p: &SamplingPlan) -> String {
    serde_json::to_string_pretty(&PlanFile::from_plan(p)).expect("serializable")
}

pub fn plan_from_json(s: &str) -> Result<SamplingPlan> {
    parse_plan_file(s)?.to_plan()
}

pub fn parse_plan_file(s: &str) -> Result<PlanFile> {
    serde_json::from_str::<PlanFile>(s)
        .map_err(|e| Error::InvalidArgument(format!("plan JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::periodic_w_set;
    use proptest::prelude::*;

    #[test]
    fn kernel_document_shape() {
        let k = Kernel::from_real_symbol(FiniteGroup::cyclic(4).unwrap(), &[1.0, 2.0, 1.0, 2.0])
            .unwrap();
        let v: serde_json::Value = serde_json::from_str(&kernel_to_json(&k)).unwrap();
        assert_eq!(v["schema"], "dynsamp/1");
        assert_eq!(v["factors"], serde_json::json!([4]));
        assert_eq!(v["symbol_re"], serde_json::json!([1.0, 2.0, 1.0, 2.0]));
    }

    #[test]
    fn imaginary_part_optional() {
        let k = kernel_from_json(r#"{"factors":[3],"symbol_re":[1,2,3]}"#).unwrap();
        assert_eq!(k.symbol()[2], Complex64::new(3.0, 0.0));
        assert!(kernel_from_json(r#"{"factors":[3],"symbol_re":[1,2]}"#).is_err());
        assert!(
            kernel_from_json(r#"{"schema":"dynsamp/2","factors":[1],"symbol_re":[1]}"#).is_err()
        );
        assert!(kernel_from_json("{").is_err());
    }

    #[test]
    fn periodic_plan_document() {
        let c = periodic_w_set(6, 3, &[0, 1]).unwrap();
        let f = PlanFile::from_periodic(&c.plan).with_recipe(c.recipe.clone());
        let s = serde_json::to_string(&f).unwrap();
        let back = parse_plan_file(&s).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_periodic().unwrap().unwrap(), c.plan);
        let mut broken = back.clone();
        broken.omega.pop();
        broken.depths.pop();
        assert!(broken.to_periodic().is_err());
    }

    proptest! {
        #[test]
        fn documents_round_trip(
            factors in prop::collection::vec(1usize..5, 1..3),
            re in prop::collection::vec(-1e3f64..1e3, 16),
            im in prop::collection::vec(-1e3f64..1e3, 16),
            depth in 0usize..6,
            pick in prop::collection::vec(any::<bool>(), 16),
        ) {
            let g = FiniteGroup::new(&factors).unwrap();
            let n = g.order();
            let sym: Vec<Complex64> = (0..n).map(|i| Complex64::new(re[i], im[i])).collect();
            let k = Kernel::from_symbol(g.clone(), sym).unwrap();
            let k2 = kernel_from_json(&kernel_to_json(&k)).unwrap();
            prop_assert_eq!(k.symbol(), k2.symbol());
            prop_assert_eq!(k.group(), k2.group());

            let mut omega: Vec<usize> = (0..n).filter(|&i| pick[i]).collect();
            if omega.is_empty() { omega.push(0); }
            let plan = SamplingPlan::new(g, omega.iter().map(|&i| (i, depth + i % 3))).unwrap();
            prop_assert_eq!(plan_from_json(&plan_to_json(&plan)).unwrap(), plan);
        }
    }
}
