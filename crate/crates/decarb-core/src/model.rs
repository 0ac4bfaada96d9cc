//! Translates a validated [`Instance`] into a standard-form MILP.
//!
//! Per plant and period the model decides gross generation and how that
//! generation splits between an unabated stream, CCS-retrofitted streams and
//! alternative-fuel streams; per period it additionally sizes the standalone
//! renewable and NET deployments. Auxiliary variables carry the period CO2
//! load and the period cost totals so that the emission/budget caps and both
//! objectives are plain linear rows.
//!
//! Conventions:
//! - periods are 1-based everywhere, matching the instance data;
//! - a variable that the timeline (commissioning window) or the availability
//!   matrix rules out is created anyway and fixed to zero through its
//!   bounds, so catalogue indices are the same for every scenario;
//! - generation ratchets apply only while a plant is commissioned in both
//!   adjacent periods, otherwise decommissioning would be infeasible.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::domain::{validate_instance, FuelKind, Instance, PlantCategory, Violation};
use crate::milp::{MilpProblem, ProblemBuilder, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Minimise the planning cost; CO2 emission limits become constraints.
    MinBudget,
    /// Minimise CO2 emissions; period budgets become constraints.
    MinEmission,
}

impl Objective {
    pub fn tag(self) -> &'static str {
        match self {
            Objective::MinBudget => "min_budget",
            Objective::MinEmission => "min_emission",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown objective {0:?}: expected min_budget or min_emission")]
pub struct ParseObjectiveError(String);

impl FromStr for Objective {
    type Err = ParseObjectiveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "min_budget" => Ok(Objective::MinBudget),
            "min_emission" => Ok(Objective::MinEmission),
            other => Err(ParseObjectiveError(other.to_string())),
        }
    }
}

/// One model variable, identified by role and domain indices. Plant, tech
/// and fuel indices point into the instance vectors; `period` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKey {
    /// Gross generation of a plant (TWh/y).
    GrossGen { plant: usize, period: usize },
    /// Generation left unabated (no CCS, original fuel).
    UnabatedNet { plant: usize, period: usize },
    /// Plant on/off.
    PlantOn { plant: usize, period: usize },
    /// Gross generation routed through a CCS technology.
    RetrofitGross { plant: usize, period: usize, ccs: usize },
    /// Net output of a retrofitted stream after parasitic loss.
    RetrofitNet { plant: usize, period: usize, ccs: usize },
    /// CCS deployment indicator.
    RetrofitOn { plant: usize, period: usize, ccs: usize },
    /// Generation on an alternative solid fuel.
    AltSolid { plant: usize, period: usize, fuel: usize },
    AltSolidOn { plant: usize, period: usize, fuel: usize },
    /// Generation on an alternative gas fuel.
    AltGas { plant: usize, period: usize, fuel: usize },
    AltGasOn { plant: usize, period: usize, fuel: usize },
    /// Standalone renewable deployment (TWh/y).
    RenewableGen { period: usize, tech: usize },
    RenewableOn { period: usize, tech: usize },
    /// Energy-producing NET deployment.
    EpNetGen { period: usize, tech: usize },
    EpNetOn { period: usize, tech: usize },
    /// Energy-consuming NET deployment.
    EcNetGen { period: usize, tech: usize },
    EcNetOn { period: usize, tech: usize },
    /// Period CO2 load total (Mt/y); free sign.
    PeriodEmissions { period: usize },
    /// Period cost of plant generation (operating + annualised capex).
    PlantCostTotal { period: usize },
    /// Period cost of standalone renewables.
    RenewableCostTotal { period: usize },
    /// Period cost of energy-producing NETs.
    EpNetCostTotal { period: usize },
    /// Period cost of energy-consuming NETs.
    EcNetCostTotal { period: usize },
    /// Period grand cost total (mil USD/y).
    PeriodCost { period: usize },
}

impl VarKey {
    pub fn is_binary(self) -> bool {
        matches!(
            self,
            VarKey::PlantOn { .. }
                | VarKey::RetrofitOn { .. }
                | VarKey::AltSolidOn { .. }
                | VarKey::AltGasOn { .. }
                | VarKey::RenewableOn { .. }
                | VarKey::EpNetOn { .. }
                | VarKey::EcNetOn { .. }
        )
    }
}

/// Bijective map between [`VarKey`]s and the dense variable indices of the
/// assembled problem.
#[derive(Debug, Clone, Default)]
pub struct VariableCatalog {
    keys: Vec<VarKey>,
    index: BTreeMap<VarKey, usize>,
}

impl VariableCatalog {
    fn insert(&mut self, key: VarKey) -> usize {
        let idx = self.keys.len();
        self.keys.push(key);
        let previous = self.index.insert(key, idx);
        debug_assert!(previous.is_none(), "duplicate catalogue key {key:?}");
        idx
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Index of `key`; panics if the key was never catalogued.
    pub fn index(&self, key: VarKey) -> usize {
        self.index[&key]
    }

    pub fn get(&self, key: VarKey) -> Option<usize> {
        self.index.get(&key).copied()
    }

    pub fn key(&self, index: usize) -> VarKey {
        self.keys[index]
    }

    pub fn keys(&self) -> impl Iterator<Item = (usize, VarKey)> + '_ {
        self.keys.iter().copied().enumerate()
    }

    pub fn num_binaries(&self) -> usize {
        self.keys.iter().filter(|k| k.is_binary()).count()
    }

    /// Human-readable name, used for diagnostics and the MPS name map.
    pub fn display_name(&self, instance: &Instance, key: VarKey) -> String {
        let plant = |i: usize| instance.plants[i].id.as_str();
        let ccs = |n: usize| instance.ccs_techs[n].id.as_str();
        let alt = |s: usize| instance.alt_fuels[s].id.as_str();
        let ren = |r: usize| instance.renewables[r].id.as_str();
        let net = |t: usize| instance.nets[t].id.as_str();
        match key {
            VarKey::GrossGen { plant: i, period } => format!("gross_gen[{},{period}]", plant(i)),
            VarKey::UnabatedNet { plant: i, period } => format!("unabated_net[{},{period}]", plant(i)),
            VarKey::PlantOn { plant: i, period } => format!("plant_on[{},{period}]", plant(i)),
            VarKey::RetrofitGross { plant: i, period, ccs: n } => {
                format!("retrofit_gross[{},{period},{}]", plant(i), ccs(n))
            }
            VarKey::RetrofitNet { plant: i, period, ccs: n } => {
                format!("retrofit_net[{},{period},{}]", plant(i), ccs(n))
            }
            VarKey::RetrofitOn { plant: i, period, ccs: n } => {
                format!("retrofit_on[{},{period},{}]", plant(i), ccs(n))
            }
            VarKey::AltSolid { plant: i, period, fuel } => {
                format!("alt_solid[{},{period},{}]", plant(i), alt(fuel))
            }
            VarKey::AltSolidOn { plant: i, period, fuel } => {
                format!("alt_solid_on[{},{period},{}]", plant(i), alt(fuel))
            }
            VarKey::AltGas { plant: i, period, fuel } => {
                format!("alt_gas[{},{period},{}]", plant(i), alt(fuel))
            }
            VarKey::AltGasOn { plant: i, period, fuel } => {
                format!("alt_gas_on[{},{period},{}]", plant(i), alt(fuel))
            }
            VarKey::RenewableGen { period, tech } => format!("renewable_gen[{period},{}]", ren(tech)),
            VarKey::RenewableOn { period, tech } => format!("renewable_on[{period},{}]", ren(tech)),
            VarKey::EpNetGen { period, tech } => format!("ep_net_gen[{period},{}]", net(tech)),
            VarKey::EpNetOn { period, tech } => format!("ep_net_on[{period},{}]", net(tech)),
            VarKey::EcNetGen { period, tech } => format!("ec_net_gen[{period},{}]", net(tech)),
            VarKey::EcNetOn { period, tech } => format!("ec_net_on[{period},{}]", net(tech)),
            VarKey::PeriodEmissions { period } => format!("period_emissions[{period}]"),
            VarKey::PlantCostTotal { period } => format!("plant_cost[{period}]"),
            VarKey::RenewableCostTotal { period } => format!("renewable_cost[{period}]"),
            VarKey::EpNetCostTotal { period } => format!("ep_net_cost[{period}]"),
            VarKey::EcNetCostTotal { period } => format!("ec_net_cost[{period}]"),
            VarKey::PeriodCost { period } => format!("period_cost[{period}]"),
        }
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("instance fails validation with {} violation(s); first: {}", .0.len(), .0[0])]
    InvalidInstance(Vec<Violation>),
    #[error("CCS technology {ccs} has parasitic power loss 1 in period {period}: retrofit intensity is undefined")]
    ParasiticLossIsOne { ccs: String, period: usize },
}

/// CO2 intensity of a plant stream retrofitted with CCS: the removal ratio
/// scales the load down while the parasitic loss shrinks the net energy the
/// load is attributed to.
pub fn retrofit_intensity(plant_intensity: f64, removal_ratio: f64, parasitic_loss: f64) -> f64 {
    plant_intensity * (1.0 - removal_ratio) / (1.0 - parasitic_loss)
}

/// The assembled problem plus the catalogue needed to decode its solution.
#[derive(Debug, Clone)]
pub struct BuiltModel {
    pub problem: MilpProblem,
    pub catalog: VariableCatalog,
    pub objective: Objective,
}

/// Optional structural toggles; the defaults are what `build_model` uses.
#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    /// Also ratchet the plant on/off binaries inside the commissioned
    /// window. Implied by the generation ratchet whenever the lower bound is
    /// positive, but stated explicitly it strengthens the LP relaxation.
    pub plant_on_ratchet: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { plant_on_ratchet: true }
    }
}

pub fn build_model(instance: &Instance, objective: Objective) -> Result<BuiltModel, BuildError> {
    build_model_with(instance, objective, BuildOptions::default())
}

pub fn build_model_with(
    instance: &Instance,
    objective: Objective,
    options: BuildOptions,
) -> Result<BuiltModel, BuildError> {
    let violations = validate_instance(instance);
    if !violations.is_empty() {
        return Err(BuildError::InvalidInstance(violations));
    }
    for ccs in &instance.ccs_techs {
        for (k0, &x) in ccs.parasitic_loss.iter().enumerate() {
            if x == 1.0 {
                return Err(BuildError::ParasiticLossIsOne { ccs: ccs.id.clone(), period: k0 + 1 });
            }
        }
    }

    let kk = instance.num_periods();
    let num_plants = instance.plants.len();
    let num_ccs = instance.ccs_techs.len();
    let inf = f64::INFINITY;

    let mut catalog = VariableCatalog::default();
    let mut b = ProblemBuilder::new();
    let add = |catalog: &mut VariableCatalog, b: &mut ProblemBuilder, key: VarKey, lo: f64, hi: f64| {
        let idx = catalog.insert(key);
        let milp_idx = b.add_var(catalog.display_name(instance, key), lo, hi, key.is_binary(), 0.0);
        debug_assert_eq!(idx, milp_idx);
        idx
    };

    // ------------------------------------------------------------------
    // Variables.
    // ------------------------------------------------------------------
    for (i, plant) in instance.plants.iter().enumerate() {
        for k in 1..=kk {
            add(&mut catalog, &mut b, VarKey::GrossGen { plant: i, period: k }, 0.0, plant.upper_bound);
            add(&mut catalog, &mut b, VarKey::UnabatedNet { plant: i, period: k }, 0.0, plant.upper_bound);
            add(&mut catalog, &mut b, VarKey::PlantOn { plant: i, period: k }, 0.0, 1.0);
        }
    }
    for (i, plant) in instance.plants.iter().enumerate() {
        for k in 1..=kk {
            for n in 0..num_ccs {
                add(
                    &mut catalog,
                    &mut b,
                    VarKey::RetrofitGross { plant: i, period: k, ccs: n },
                    0.0,
                    plant.upper_bound,
                );
                add(
                    &mut catalog,
                    &mut b,
                    VarKey::RetrofitNet { plant: i, period: k, ccs: n },
                    0.0,
                    plant.upper_bound,
                );
                add(&mut catalog, &mut b, VarKey::RetrofitOn { plant: i, period: k, ccs: n }, 0.0, 1.0);
            }
        }
    }
    for (i, plant) in instance.plants.iter().enumerate() {
        for k in 1..=kk {
            for (s, _) in instance.alt_solid_fuels() {
                add(&mut catalog, &mut b, VarKey::AltSolid { plant: i, period: k, fuel: s }, 0.0, plant.upper_bound);
                add(&mut catalog, &mut b, VarKey::AltSolidOn { plant: i, period: k, fuel: s }, 0.0, 1.0);
            }
            for (g, _) in instance.alt_gas_fuels() {
                add(&mut catalog, &mut b, VarKey::AltGas { plant: i, period: k, fuel: g }, 0.0, plant.upper_bound);
                add(&mut catalog, &mut b, VarKey::AltGasOn { plant: i, period: k, fuel: g }, 0.0, 1.0);
            }
        }
    }
    for k in 1..=kk {
        for (r, tech) in instance.renewables.iter().enumerate() {
            add(&mut catalog, &mut b, VarKey::RenewableGen { period: k, tech: r }, 0.0, tech.availability_cap[k - 1]);
            add(&mut catalog, &mut b, VarKey::RenewableOn { period: k, tech: r }, 0.0, 1.0);
        }
        for (p, tech) in instance.ep_nets() {
            add(&mut catalog, &mut b, VarKey::EpNetGen { period: k, tech: p }, 0.0, tech.availability_cap[k - 1]);
            add(&mut catalog, &mut b, VarKey::EpNetOn { period: k, tech: p }, 0.0, 1.0);
        }
        for (q, tech) in instance.ec_nets() {
            add(&mut catalog, &mut b, VarKey::EcNetGen { period: k, tech: q }, 0.0, tech.availability_cap[k - 1]);
            add(&mut catalog, &mut b, VarKey::EcNetOn { period: k, tech: q }, 0.0, 1.0);
        }
    }
    for k in 1..=kk {
        add(&mut catalog, &mut b, VarKey::PeriodEmissions { period: k }, -inf, inf);
        add(&mut catalog, &mut b, VarKey::PlantCostTotal { period: k }, 0.0, inf);
        add(&mut catalog, &mut b, VarKey::RenewableCostTotal { period: k }, 0.0, inf);
        add(&mut catalog, &mut b, VarKey::EpNetCostTotal { period: k }, 0.0, inf);
        add(&mut catalog, &mut b, VarKey::EcNetCostTotal { period: k }, 0.0, inf);
        add(&mut catalog, &mut b, VarKey::PeriodCost { period: k }, 0.0, inf);
    }

    // ------------------------------------------------------------------
    // Timeline, attachment and availability fixing (all through bounds).
    // ------------------------------------------------------------------
    let fix = |b: &mut ProblemBuilder, key: VarKey| {
        b.fix_var(catalog.index(key), 0.0);
    };
    for (i, plant) in instance.plants.iter().enumerate() {
        for k in 1..=kk {
            let dead = !plant.commissioned_in(k);
            if dead {
                fix(&mut b, VarKey::GrossGen { plant: i, period: k });
                fix(&mut b, VarKey::UnabatedNet { plant: i, period: k });
                fix(&mut b, VarKey::PlantOn { plant: i, period: k });
            }
            for (n, ccs) in instance.ccs_techs.iter().enumerate() {
                let allowed = plant.category == PlantCategory::Fossil
                    && instance.availability.available(&ccs.id, k)
                    && !dead;
                if !allowed {
                    fix(&mut b, VarKey::RetrofitGross { plant: i, period: k, ccs: n });
                    fix(&mut b, VarKey::RetrofitNet { plant: i, period: k, ccs: n });
                    fix(&mut b, VarKey::RetrofitOn { plant: i, period: k, ccs: n });
                }
            }
            for (s, fuel) in instance.alt_solid_fuels() {
                let allowed = plant.fuel == FuelKind::Coal
                    && instance.availability.available(&fuel.id, k)
                    && !dead;
                if !allowed {
                    fix(&mut b, VarKey::AltSolid { plant: i, period: k, fuel: s });
                    fix(&mut b, VarKey::AltSolidOn { plant: i, period: k, fuel: s });
                }
            }
            for (g, fuel) in instance.alt_gas_fuels() {
                let allowed = plant.fuel == FuelKind::NaturalGas
                    && instance.availability.available(&fuel.id, k)
                    && !dead;
                if !allowed {
                    fix(&mut b, VarKey::AltGas { plant: i, period: k, fuel: g });
                    fix(&mut b, VarKey::AltGasOn { plant: i, period: k, fuel: g });
                }
            }
        }
    }
    for k in 1..=kk {
        for (r, tech) in instance.renewables.iter().enumerate() {
            if !instance.availability.available(&tech.id, k) {
                fix(&mut b, VarKey::RenewableGen { period: k, tech: r });
                fix(&mut b, VarKey::RenewableOn { period: k, tech: r });
            }
        }
        for (p, tech) in instance.ep_nets() {
            if !instance.availability.available(&tech.id, k) {
                fix(&mut b, VarKey::EpNetGen { period: k, tech: p });
                fix(&mut b, VarKey::EpNetOn { period: k, tech: p });
            }
        }
        for (q, tech) in instance.ec_nets() {
            if !instance.availability.available(&tech.id, k) {
                fix(&mut b, VarKey::EcNetGen { period: k, tech: q });
                fix(&mut b, VarKey::EcNetOn { period: k, tech: q });
            }
        }
    }

    // ------------------------------------------------------------------
    // Constraints.
    // ------------------------------------------------------------------
    let idx = |key: VarKey| catalog.index(key);

    // Demand satisfaction by the plant fleet.
    for k in 1..=kk {
        let coeffs = (0..num_plants)
            .map(|i| (idx(VarKey::GrossGen { plant: i, period: k }), 1.0))
            .collect();
        b.add_row(format!("demand[{k}]"), coeffs, Relation::Eq, instance.period_params[k - 1].demand);
    }

    // Generation bounds tied to the on/off binary.
    for (i, plant) in instance.plants.iter().enumerate() {
        for k in 1..=kk {
            let fs = idx(VarKey::GrossGen { plant: i, period: k });
            let on = idx(VarKey::PlantOn { plant: i, period: k });
            b.add_row(
                format!("gen_lb[{},{k}]", plant.id),
                vec![(fs, 1.0), (on, -plant.lower_bound)],
                Relation::Ge,
                0.0,
            );
            b.add_row(
                format!("gen_ub[{},{k}]", plant.id),
                vec![(fs, 1.0), (on, -plant.upper_bound)],
                Relation::Le,
                0.0,
            );
        }
    }

    // Generation may not shrink while the plant stays commissioned.
    for (i, plant) in instance.plants.iter().enumerate() {
        for k in 1..kk {
            if !(plant.commissioned_in(k) && plant.commissioned_in(k + 1)) {
                continue;
            }
            let cur = idx(VarKey::GrossGen { plant: i, period: k });
            let next = idx(VarKey::GrossGen { plant: i, period: k + 1 });
            b.add_row(
                format!("gen_ratchet[{},{k}]", plant.id),
                vec![(next, 1.0), (cur, -1.0)],
                Relation::Ge,
                0.0,
            );
            if options.plant_on_ratchet {
                let cur_on = idx(VarKey::PlantOn { plant: i, period: k });
                let next_on = idx(VarKey::PlantOn { plant: i, period: k + 1 });
                b.add_row(
                    format!("on_ratchet[{},{k}]", plant.id),
                    vec![(next_on, 1.0), (cur_on, -1.0)],
                    Relation::Ge,
                    0.0,
                );
            }
        }
    }

    // CCS retrofit streams.
    for (i, plant) in instance.plants.iter().enumerate() {
        for k in 1..=kk {
            for (n, ccs) in instance.ccs_techs.iter().enumerate() {
                let fr = idx(VarKey::RetrofitGross { plant: i, period: k, ccs: n });
                let fnr = idx(VarKey::RetrofitNet { plant: i, period: k, ccs: n });
                let on = idx(VarKey::RetrofitOn { plant: i, period: k, ccs: n });
                b.add_row(
                    format!("ccs_cap[{},{k},{}]", plant.id, ccs.id),
                    vec![(fr, 1.0), (on, -plant.upper_bound)],
                    Relation::Le,
                    0.0,
                );
                // Net output loses the parasitic share of the gross stream.
                b.add_row(
                    format!("ccs_net[{},{k},{}]", plant.id, ccs.id),
                    vec![(fnr, 1.0), (fr, -(1.0 - ccs.parasitic_loss[k - 1]))],
                    Relation::Eq,
                    0.0,
                );
            }
            let mut coeffs: Vec<(usize, f64)> = (0..num_ccs)
                .map(|n| (idx(VarKey::RetrofitGross { plant: i, period: k, ccs: n }), 1.0))
                .collect();
            coeffs.push((idx(VarKey::GrossGen { plant: i, period: k }), -1.0));
            b.add_row(format!("ccs_split[{},{k}]", plant.id), coeffs, Relation::Le, 0.0);
        }
        for k in 1..kk {
            if !(plant.commissioned_in(k) && plant.commissioned_in(k + 1)) {
                continue;
            }
            for (n, ccs) in instance.ccs_techs.iter().enumerate() {
                let cur = idx(VarKey::RetrofitGross { plant: i, period: k, ccs: n });
                let next = idx(VarKey::RetrofitGross { plant: i, period: k + 1, ccs: n });
                b.add_row(
                    format!("ccs_ratchet[{},{k},{}]", plant.id, ccs.id),
                    vec![(next, 1.0), (cur, -1.0)],
                    Relation::Ge,
                    0.0,
                );
            }
        }
    }

    // Alternative fuel streams.
    for (i, plant) in instance.plants.iter().enumerate() {
        for k in 1..=kk {
            for (s, fuel) in instance.alt_solid_fuels() {
                let fas = idx(VarKey::AltSolid { plant: i, period: k, fuel: s });
                let on = idx(VarKey::AltSolidOn { plant: i, period: k, fuel: s });
                b.add_row(
                    format!("alt_solid_cap[{},{k},{}]", plant.id, fuel.id),
                    vec![(fas, 1.0), (on, -plant.upper_bound)],
                    Relation::Le,
                    0.0,
                );
            }
            for (g, fuel) in instance.alt_gas_fuels() {
                let fag = idx(VarKey::AltGas { plant: i, period: k, fuel: g });
                let on = idx(VarKey::AltGasOn { plant: i, period: k, fuel: g });
                b.add_row(
                    format!("alt_gas_cap[{},{k},{}]", plant.id, fuel.id),
                    vec![(fag, 1.0), (on, -plant.upper_bound)],
                    Relation::Le,
                    0.0,
                );
            }
        }
        for k in 1..kk {
            if !(plant.commissioned_in(k) && plant.commissioned_in(k + 1)) {
                continue;
            }
            for (s, fuel) in instance.alt_solid_fuels() {
                let cur = idx(VarKey::AltSolid { plant: i, period: k, fuel: s });
                let next = idx(VarKey::AltSolid { plant: i, period: k + 1, fuel: s });
                b.add_row(
                    format!("alt_solid_ratchet[{},{k},{}]", plant.id, fuel.id),
                    vec![(next, 1.0), (cur, -1.0)],
                    Relation::Ge,
                    0.0,
                );
            }
            for (g, fuel) in instance.alt_gas_fuels() {
                let cur = idx(VarKey::AltGas { plant: i, period: k, fuel: g });
                let next = idx(VarKey::AltGas { plant: i, period: k + 1, fuel: g });
                b.add_row(
                    format!("alt_gas_ratchet[{},{k},{}]", plant.id, fuel.id),
                    vec![(next, 1.0), (cur, -1.0)],
                    Relation::Ge,
                    0.0,
                );
            }
        }
    }

    // Each plant's gross generation splits across its streams.
    for (i, plant) in instance.plants.iter().enumerate() {
        for k in 1..=kk {
            let mut coeffs = vec![(idx(VarKey::UnabatedNet { plant: i, period: k }), 1.0)];
            for n in 0..num_ccs {
                coeffs.push((idx(VarKey::RetrofitGross { plant: i, period: k, ccs: n }), 1.0));
            }
            for (s, _) in instance.alt_solid_fuels() {
                coeffs.push((idx(VarKey::AltSolid { plant: i, period: k, fuel: s }), 1.0));
            }
            for (g, _) in instance.alt_gas_fuels() {
                coeffs.push((idx(VarKey::AltGas { plant: i, period: k, fuel: g }), 1.0));
            }
            coeffs.push((idx(VarKey::GrossGen { plant: i, period: k }), -1.0));
            b.add_row(format!("plant_balance[{},{k}]", plant.id), coeffs, Relation::Eq, 0.0);
        }
    }

    // Deployment caps and ratchets for the standalone technologies.
    for k in 1..=kk {
        for (r, tech) in instance.renewables.iter().enumerate() {
            let gen = idx(VarKey::RenewableGen { period: k, tech: r });
            let on = idx(VarKey::RenewableOn { period: k, tech: r });
            b.add_row(
                format!("renewable_cap[{k},{}]", tech.id),
                vec![(gen, 1.0), (on, -tech.availability_cap[k - 1])],
                Relation::Le,
                0.0,
            );
        }
        for (p, tech) in instance.ep_nets() {
            let gen = idx(VarKey::EpNetGen { period: k, tech: p });
            let on = idx(VarKey::EpNetOn { period: k, tech: p });
            b.add_row(
                format!("ep_cap[{k},{}]", tech.id),
                vec![(gen, 1.0), (on, -tech.availability_cap[k - 1])],
                Relation::Le,
                0.0,
            );
        }
        for (q, tech) in instance.ec_nets() {
            let gen = idx(VarKey::EcNetGen { period: k, tech: q });
            let on = idx(VarKey::EcNetOn { period: k, tech: q });
            b.add_row(
                format!("ec_cap[{k},{}]", tech.id),
                vec![(gen, 1.0), (on, -tech.availability_cap[k - 1])],
                Relation::Le,
                0.0,
            );
        }
    }
    for k in 1..kk {
        for (r, tech) in instance.renewables.iter().enumerate() {
            let cur = idx(VarKey::RenewableGen { period: k, tech: r });
            let next = idx(VarKey::RenewableGen { period: k + 1, tech: r });
            b.add_row(
                format!("renewable_ratchet[{k},{}]", tech.id),
                vec![(next, 1.0), (cur, -1.0)],
                Relation::Ge,
                0.0,
            );
        }
        for (p, tech) in instance.ep_nets() {
            let cur = idx(VarKey::EpNetGen { period: k, tech: p });
            let next = idx(VarKey::EpNetGen { period: k + 1, tech: p });
            b.add_row(
                format!("ep_ratchet[{k},{}]", tech.id),
                vec![(next, 1.0), (cur, -1.0)],
                Relation::Ge,
                0.0,
            );
        }
        for (q, tech) in instance.ec_nets() {
            let cur = idx(VarKey::EcNetGen { period: k, tech: q });
            let next = idx(VarKey::EcNetGen { period: k + 1, tech: q });
            b.add_row(
                format!("ec_ratchet[{k},{}]", tech.id),
                vec![(next, 1.0), (cur, -1.0)],
                Relation::Ge,
                0.0,
            );
        }
    }

    // System-wide energy balance: net supplies cover demand plus the energy
    // the EC-NETs consume.
    for k in 1..=kk {
        let mut coeffs = Vec::new();
        for i in 0..num_plants {
            coeffs.push((idx(VarKey::UnabatedNet { plant: i, period: k }), 1.0));
            for n in 0..num_ccs {
                coeffs.push((idx(VarKey::RetrofitNet { plant: i, period: k, ccs: n }), 1.0));
            }
            for (s, _) in instance.alt_solid_fuels() {
                coeffs.push((idx(VarKey::AltSolid { plant: i, period: k, fuel: s }), 1.0));
            }
            for (g, _) in instance.alt_gas_fuels() {
                coeffs.push((idx(VarKey::AltGas { plant: i, period: k, fuel: g }), 1.0));
            }
        }
        for (r, _) in instance.renewables.iter().enumerate() {
            coeffs.push((idx(VarKey::RenewableGen { period: k, tech: r }), 1.0));
        }
        for (p, _) in instance.ep_nets() {
            coeffs.push((idx(VarKey::EpNetGen { period: k, tech: p }), 1.0));
        }
        for (q, _) in instance.ec_nets() {
            coeffs.push((idx(VarKey::EcNetGen { period: k, tech: q }), -1.0));
        }
        b.add_row(
            format!("system_balance[{k}]"),
            coeffs,
            Relation::Eq,
            instance.period_params[k - 1].demand,
        );
    }

    // Period CO2 load definition.
    for k in 1..=kk {
        let mut coeffs = Vec::new();
        for (i, plant) in instance.plants.iter().enumerate() {
            coeffs.push((idx(VarKey::UnabatedNet { plant: i, period: k }), plant.co2_intensity));
            for (n, ccs) in instance.ccs_techs.iter().enumerate() {
                let cr = retrofit_intensity(
                    plant.co2_intensity,
                    ccs.removal_ratio[k - 1],
                    ccs.parasitic_loss[k - 1],
                );
                coeffs.push((idx(VarKey::RetrofitNet { plant: i, period: k, ccs: n }), cr));
            }
            for (s, fuel) in instance.alt_solid_fuels() {
                coeffs.push((idx(VarKey::AltSolid { plant: i, period: k, fuel: s }), fuel.co2_intensity[k - 1]));
            }
            for (g, fuel) in instance.alt_gas_fuels() {
                coeffs.push((idx(VarKey::AltGas { plant: i, period: k, fuel: g }), fuel.co2_intensity[k - 1]));
            }
        }
        for (r, tech) in instance.renewables.iter().enumerate() {
            coeffs.push((idx(VarKey::RenewableGen { period: k, tech: r }), tech.co2_intensity[k - 1]));
        }
        for (p, tech) in instance.ep_nets() {
            coeffs.push((idx(VarKey::EpNetGen { period: k, tech: p }), tech.co2_intensity[k - 1]));
        }
        for (q, tech) in instance.ec_nets() {
            coeffs.push((idx(VarKey::EcNetGen { period: k, tech: q }), tech.co2_intensity[k - 1]));
        }
        coeffs.push((idx(VarKey::PeriodEmissions { period: k }), -1.0));
        b.add_row(format!("co2_load[{k}]"), coeffs, Relation::Eq, 0.0);
    }

    // Cost definitions. Fixed and capacity-dependent capital charges are
    // scaled by the annualised cost factor.
    let aff = instance.aff;
    for k in 1..=kk {
        let mut coeffs = Vec::new();
        for (i, plant) in instance.plants.iter().enumerate() {
            coeffs.push((
                idx(VarKey::UnabatedNet { plant: i, period: k }),
                plant.op_cost[k - 1] + aff * plant.capacity_capex[k - 1],
            ));
            coeffs.push((idx(VarKey::PlantOn { plant: i, period: k }), aff * plant.fixed_capex[k - 1]));
        }
        coeffs.push((idx(VarKey::PlantCostTotal { period: k }), -1.0));
        b.add_row(format!("plant_cost_def[{k}]"), coeffs, Relation::Eq, 0.0);

        let mut coeffs = Vec::new();
        for (r, tech) in instance.renewables.iter().enumerate() {
            coeffs.push((
                idx(VarKey::RenewableGen { period: k, tech: r }),
                tech.op_cost[k - 1] + aff * tech.capacity_capex[k - 1],
            ));
            coeffs.push((idx(VarKey::RenewableOn { period: k, tech: r }), aff * tech.fixed_capex[k - 1]));
        }
        coeffs.push((idx(VarKey::RenewableCostTotal { period: k }), -1.0));
        b.add_row(format!("renewable_cost_def[{k}]"), coeffs, Relation::Eq, 0.0);

        let mut coeffs = Vec::new();
        for (p, tech) in instance.ep_nets() {
            coeffs.push((
                idx(VarKey::EpNetGen { period: k, tech: p }),
                tech.op_cost[k - 1] + aff * tech.capacity_capex[k - 1],
            ));
            coeffs.push((idx(VarKey::EpNetOn { period: k, tech: p }), aff * tech.fixed_capex[k - 1]));
        }
        coeffs.push((idx(VarKey::EpNetCostTotal { period: k }), -1.0));
        b.add_row(format!("ep_net_cost_def[{k}]"), coeffs, Relation::Eq, 0.0);

        let mut coeffs = Vec::new();
        for (q, tech) in instance.ec_nets() {
            coeffs.push((
                idx(VarKey::EcNetGen { period: k, tech: q }),
                tech.op_cost[k - 1] + aff * tech.capacity_capex[k - 1],
            ));
            coeffs.push((idx(VarKey::EcNetOn { period: k, tech: q }), aff * tech.fixed_capex[k - 1]));
        }
        coeffs.push((idx(VarKey::EcNetCostTotal { period: k }), -1.0));
        b.add_row(format!("ec_net_cost_def[{k}]"), coeffs, Relation::Eq, 0.0);

        // Grand total: the four subtotals plus the plant-attached
        // mitigation costs (CCS and alternative fuels).
        let mut coeffs = vec![
            (idx(VarKey::PlantCostTotal { period: k }), 1.0),
            (idx(VarKey::RenewableCostTotal { period: k }), 1.0),
            (idx(VarKey::EpNetCostTotal { period: k }), 1.0),
            (idx(VarKey::EcNetCostTotal { period: k }), 1.0),
        ];
        for i in 0..num_plants {
            for (n, ccs) in instance.ccs_techs.iter().enumerate() {
                coeffs.push((idx(VarKey::RetrofitNet { plant: i, period: k, ccs: n }), ccs.gen_cost[k - 1]));
                coeffs.push((idx(VarKey::RetrofitOn { plant: i, period: k, ccs: n }), aff * ccs.fixed_cost[k - 1]));
            }
            for (s, fuel) in instance.alt_solid_fuels() {
                coeffs.push((idx(VarKey::AltSolid { plant: i, period: k, fuel: s }), fuel.cost[k - 1]));
                coeffs.push((idx(VarKey::AltSolidOn { plant: i, period: k, fuel: s }), aff * fuel.fixed_cost[k - 1]));
            }
            for (g, fuel) in instance.alt_gas_fuels() {
                coeffs.push((idx(VarKey::AltGas { plant: i, period: k, fuel: g }), fuel.cost[k - 1]));
                coeffs.push((idx(VarKey::AltGasOn { plant: i, period: k, fuel: g }), aff * fuel.fixed_cost[k - 1]));
            }
        }
        coeffs.push((idx(VarKey::PeriodCost { period: k }), -1.0));
        b.add_row(format!("total_cost_def[{k}]"), coeffs, Relation::Eq, 0.0);
    }

    // Objective-dependent caps and the objective itself.
    match objective {
        Objective::MinBudget => {
            for k in 1..=kk {
                b.add_row(
                    format!("emission_cap[{k}]"),
                    vec![(idx(VarKey::PeriodEmissions { period: k }), 1.0)],
                    Relation::Le,
                    instance.period_params[k - 1].emission_limit,
                );
            }
            for k in 1..=kk {
                b.set_objective(idx(VarKey::PeriodCost { period: k }), 1.0);
            }
        }
        Objective::MinEmission => {
            for k in 1..=kk {
                b.add_row(
                    format!("budget_cap[{k}]"),
                    vec![(idx(VarKey::PeriodCost { period: k }), 1.0)],
                    Relation::Le,
                    instance.period_params[k - 1].budget,
                );
            }
            for k in 1..=kk {
                b.set_objective(idx(VarKey::PeriodEmissions { period: k }), 1.0);
            }
        }
    }

    let problem = b.finish();
    debug_assert_eq!(problem.num_vars(), catalog.len());
    Ok(BuiltModel { problem, catalog, objective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn retrofit_intensity_matches_hand_values() {
        // Coal intensity 1.0 with an 0.85 removal ratio and 0.15 parasitic
        // loss concentrates to 0.17647 Mt/TWh.
        let cr = retrofit_intensity(1.0, 0.85, 0.15);
        assert!((cr - 0.17647).abs() < 1e-5, "{cr}");
        // Degenerate tech: no removal, no loss -> intensity unchanged.
        assert_eq!(retrofit_intensity(0.8, 0.0, 0.0), 0.8);
    }

    #[test]
    fn case_study_binary_count_is_486() {
        let built = build_model(&fixtures::scenario2(), Objective::MinEmission).unwrap();
        // 10*6 plant binaries, 10*6*2 per CCS/solid/gas, 6*(5+3+3) period techs.
        assert_eq!(built.catalog.num_binaries(), 486);
        let from_flags = built.problem.integer.iter().filter(|&&b| b).count();
        assert_eq!(from_flags, 486);
    }

    #[test]
    fn catalog_is_bijective() {
        let built = build_model(&fixtures::scenario1(), Objective::MinBudget).unwrap();
        for (i, key) in built.catalog.keys() {
            assert_eq!(built.catalog.index(key), i);
            assert_eq!(built.catalog.key(i), key);
        }
    }

    #[test]
    fn single_period_instance_has_no_ratchets() {
        let mut instance = fixtures::scenario1();
        instance.horizon.num_periods = 1;
        // Plants commissioned after period 1 cannot exist in a 1-period run.
        instance.plants.retain(|p| p.commission_period == 1);
        for plant in &mut instance.plants {
            plant.op_cost.truncate(1);
            plant.fixed_capex.truncate(1);
            plant.capacity_capex.truncate(1);
            plant.decommission_period = 2;
        }
        for ccs in &mut instance.ccs_techs {
            ccs.removal_ratio.truncate(1);
            ccs.parasitic_loss.truncate(1);
            ccs.gen_cost.truncate(1);
            ccs.fixed_cost.truncate(1);
        }
        for fuel in &mut instance.alt_fuels {
            fuel.co2_intensity.truncate(1);
            fuel.cost.truncate(1);
            fuel.fixed_cost.truncate(1);
        }
        for ren in &mut instance.renewables {
            ren.co2_intensity.truncate(1);
            ren.op_cost.truncate(1);
            ren.availability_cap.truncate(1);
            ren.fixed_capex.truncate(1);
            ren.capacity_capex.truncate(1);
        }
        for net in &mut instance.nets {
            net.co2_intensity.truncate(1);
            net.op_cost.truncate(1);
            net.availability_cap.truncate(1);
            net.fixed_capex.truncate(1);
            net.capacity_capex.truncate(1);
        }
        instance.period_params.truncate(1);
        let ids: Vec<String> = instance.availability.ids().map(String::from).collect();
        for id in ids {
            let row = instance.availability.row(&id).unwrap()[..1].to_vec();
            instance.availability.set(&id, row);
        }

        let built = build_model(&instance, Objective::MinEmission).unwrap();
        let ratchets = built
            .problem
            .constraints
            .iter()
            .filter(|c| c.name.contains("ratchet"))
            .count();
        assert_eq!(ratchets, 0);
    }

    #[test]
    fn ratchets_respect_the_decommission_window() {
        let instance = fixtures::scenario1();
        let built = build_model(&instance, Objective::MinEmission).unwrap();
        // PLANT_7 decommissions in period 5: its last generation ratchet
        // couples periods 4 and 5... which would contradict the shutdown,
        // so the last emitted row must couple 3 -> 4.
        let plant7_ratchets: Vec<&str> = built
            .problem
            .constraints
            .iter()
            .filter(|c| c.name.starts_with("gen_ratchet[PLANT_7"))
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(plant7_ratchets, ["gen_ratchet[PLANT_7,1]", "gen_ratchet[PLANT_7,2]", "gen_ratchet[PLANT_7,3]"]);
        // PLANT_10 commissions in period 4: first ratchet couples 4 -> 5.
        let plant10_ratchets: Vec<&str> = built
            .problem
            .constraints
            .iter()
            .filter(|c| c.name.starts_with("gen_ratchet[PLANT_10"))
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(plant10_ratchets, ["gen_ratchet[PLANT_10,4]", "gen_ratchet[PLANT_10,5]"]);
    }

    #[test]
    fn timeline_and_availability_fixing_pins_bounds_to_zero() {
        let instance = fixtures::scenario2();
        let built = build_model(&instance, Objective::MinBudget).unwrap();
        let p = &built.problem;
        let c = &built.catalog;
        // PLANT_10 is commissioned in period 4.
        for k in 1..=3 {
            let j = c.index(VarKey::GrossGen { plant: 9, period: k });
            assert_eq!((p.lower[j], p.upper[j]), (0.0, 0.0));
            let j = c.index(VarKey::PlantOn { plant: 9, period: k });
            assert_eq!((p.lower[j], p.upper[j]), (0.0, 0.0));
        }
        let j = c.index(VarKey::GrossGen { plant: 9, period: 4 });
        assert!(p.upper[j] > 0.0);
        // CCS_1 is unavailable until period 4 in scenario 2 (plant 4 is gas).
        for k in 1..=3 {
            let j = c.index(VarKey::RetrofitGross { plant: 3, period: k, ccs: 0 });
            assert_eq!((p.lower[j], p.upper[j]), (0.0, 0.0));
        }
        // Renewable plants never get CCS.
        let j = c.index(VarKey::RetrofitOn { plant: 0, period: 6, ccs: 0 });
        assert_eq!((p.lower[j], p.upper[j]), (0.0, 0.0));
        // Alternative solid fuel only attaches to coal plants; PLANT_3 burns gas.
        let j = c.index(VarKey::AltSolid { plant: 2, period: 6, fuel: 0 });
        assert_eq!((p.lower[j], p.upper[j]), (0.0, 0.0));
        // ...and PLANT_8 (coal) does get it once SOLID_1 is available.
        let j = c.index(VarKey::AltSolid { plant: 7, period: 6, fuel: 0 });
        assert!(p.upper[j] > 0.0);
    }

    #[test]
    fn aff_rescales_only_capital_terms() {
        let mut low = fixtures::scenario2();
        low.aff = 1.0;
        let mut high = fixtures::scenario2();
        high.aff = 2.0;
        let built_low = build_model(&low, Objective::MinBudget).unwrap();
        let built_high = build_model(&high, Objective::MinBudget).unwrap();

        for (a, b) in built_low
            .problem
            .constraints
            .iter()
            .zip(&built_high.problem.constraints)
        {
            assert_eq!(a.name, b.name);
            let capital = a.name.starts_with("plant_cost_def")
                || a.name.starts_with("renewable_cost_def")
                || a.name.starts_with("ep_net_cost_def")
                || a.name.starts_with("ec_net_cost_def")
                || a.name.starts_with("total_cost_def");
            if !capital {
                assert_eq!(a, b, "non-cost row {} changed with AFF", a.name);
            }
        }
    }

    #[test]
    fn all_availability_off_reduces_balance_to_demand_row() {
        let mut instance = fixtures::scenario1();
        let ids: Vec<String> = instance.availability.ids().map(String::from).collect();
        for id in ids {
            instance.availability.set(&id, vec![false; 6]);
        }
        let built = build_model(&instance, Objective::MinEmission).unwrap();
        let p = &built.problem;
        for k in 1..=6 {
            let row = p
                .constraints
                .iter()
                .find(|c| c.name == format!("system_balance[{k}]"))
                .unwrap();
            assert_eq!(row.rhs, instance.period_params[k - 1].demand);
            for &(j, coeff) in &row.coeffs {
                match built.catalog.key(j) {
                    VarKey::UnabatedNet { .. } => assert_eq!(coeff, 1.0),
                    _ => assert_eq!(
                        (p.lower[j], p.upper[j]),
                        (0.0, 0.0),
                        "non-plant column {} not fixed",
                        p.var_names[j]
                    ),
                }
            }
        }
    }

    #[test]
    fn objective_switch_swaps_cap_families() {
        let instance = fixtures::scenario2();
        let budget = build_model(&instance, Objective::MinBudget).unwrap();
        assert!(budget.problem.constraints.iter().any(|c| c.name.starts_with("emission_cap")));
        assert!(!budget.problem.constraints.iter().any(|c| c.name.starts_with("budget_cap")));
        let emission = build_model(&instance, Objective::MinEmission).unwrap();
        assert!(emission.problem.constraints.iter().any(|c| c.name.starts_with("budget_cap")));
        assert!(!emission.problem.constraints.iter().any(|c| c.name.starts_with("emission_cap")));
    }

    #[test]
    fn parasitic_loss_of_one_is_a_build_error() {
        let mut instance = fixtures::scenario2();
        instance.ccs_techs[1].parasitic_loss[2] = 1.0;
        // validate_instance already rejects it...
        match build_model(&instance, Objective::MinBudget) {
            Err(BuildError::InvalidInstance(v)) => {
                assert!(v.iter().any(|v| v.column.contains("parasitic_loss")))
            }
            other => panic!("expected invalid-instance error, got {other:?}"),
        }
    }

    #[test]
    fn model_dimensions_are_stable() {
        let built = build_model(&fixtures::scenario2(), Objective::MinBudget).unwrap();
        // 10 plants x 6 periods x (FS, FNS, A) = 180; CCS adds 10*6*2*3 = 360;
        // alt fuels 10*6*2*2*2 = 480; period techs 6*(5+3+3)*2 = 132;
        // aggregates 6*6 = 36. Total 1188.
        assert_eq!(built.problem.num_vars(), 1188);
        assert!(built.problem.validate().is_ok());
    }
}
