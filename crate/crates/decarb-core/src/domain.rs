//! Planning-instance data model and validation.
//!
//! An [`Instance`] holds every parameter of the planning problem: the
//! horizon, the plant fleet, the mitigation technology pools and the
//! per-period demand/limit/budget series. Instances are immutable after
//! construction and safe to share across threads; all checking happens in
//! [`validate_instance`], which reports violations as data instead of
//! failing, so a front end can list every problem in one pass.

use std::collections::BTreeMap;
use std::fmt;

/// Number of planning periods and optional display labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanningHorizon {
    pub num_periods: usize,
    /// Display strings such as "2020 - 2024"; purely cosmetic.
    pub period_labels: Option<Vec<String>>,
}

/// Most periods a horizon may have.
pub const MAX_PERIODS: usize = 50;

impl PlanningHorizon {
    pub fn new(num_periods: usize) -> Self {
        Self { num_periods, period_labels: None }
    }

    /// Iterator over 1-based period numbers.
    pub fn periods(&self) -> impl Iterator<Item = usize> + Clone {
        1..=self.num_periods
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlantCategory {
    Renewable,
    Fossil,
}

impl fmt::Display for PlantCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlantCategory::Renewable => write!(f, "RENEWABLE"),
            PlantCategory::Fossil => write!(f, "FOSSIL"),
        }
    }
}

/// Fuel burned (or harvested) by a power plant.
///
/// The fuel drives two things: the row used to look up fuel and capital
/// costs, and which mitigation options attach to the plant (alternative
/// solid fuels to coal plants, alternative gas fuels to natural-gas plants,
/// CCS to any fossil plant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FuelKind {
    Solar,
    Hydro,
    NaturalGas,
    Oil,
    Coal,
    Biomass,
    Biogas,
    Msw,
    Other(String),
}

impl FuelKind {
    /// Canonical upper-snake-case name, as used in workbook row labels.
    pub fn name(&self) -> &str {
        match self {
            FuelKind::Solar => "SOLAR",
            FuelKind::Hydro => "HYDRO",
            FuelKind::NaturalGas => "NATURAL_GAS",
            FuelKind::Oil => "OIL",
            FuelKind::Coal => "COAL",
            FuelKind::Biomass => "BIOMASS",
            FuelKind::Biogas => "BIOGAS",
            FuelKind::Msw => "MSW",
            FuelKind::Other(name) => name,
        }
    }

    /// Parse a normalised (trimmed, upper-snake-case) fuel name.
    pub fn parse(name: &str) -> FuelKind {
        match name {
            "SOLAR" => FuelKind::Solar,
            "HYDRO" | "HYDROPOWER" => FuelKind::Hydro,
            "NATURAL_GAS" => FuelKind::NaturalGas,
            "OIL" => FuelKind::Oil,
            "COAL" => FuelKind::Coal,
            "BIOMASS" => FuelKind::Biomass,
            "BIOGAS" => FuelKind::Biogas,
            "MSW" | "MUNICIPAL_SOLID_WASTE" => FuelKind::Msw,
            other => FuelKind::Other(other.to_string()),
        }
    }
}

impl fmt::Display for FuelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// An existing or upcoming power plant.
///
/// Generation is bounded by `lower_bound..=upper_bound` whenever the plant
/// is on, and is forced to zero outside the commissioned window
/// `commission_period..decommission_period`. A decommission period of
/// `num_periods + 1` means the plant survives the whole horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerPlant {
    pub id: String,
    pub category: PlantCategory,
    pub fuel: FuelKind,
    /// Minimum generation while on, TWh/y.
    pub lower_bound: f64,
    /// Maximum generation, TWh/y.
    pub upper_bound: f64,
    /// Mt CO2 per TWh generated.
    pub co2_intensity: f64,
    /// First period the plant may generate (1-based).
    pub commission_period: usize,
    /// First period the plant may no longer generate.
    pub decommission_period: usize,
    /// Operating cost per period, mil USD/TWh.
    pub op_cost: Vec<f64>,
    /// Lump fixed capital charge per period while on, mil USD.
    pub fixed_capex: Vec<f64>,
    /// Capacity-dependent capital charge per period, mil USD/TWh.
    pub capacity_capex: Vec<f64>,
}

impl PowerPlant {
    /// Whether the plant may generate in 1-based period `k`.
    pub fn commissioned_in(&self, k: usize) -> bool {
        k >= self.commission_period && k < self.decommission_period
    }
}

/// A CO2 capture-and-storage retrofit option.
#[derive(Debug, Clone, PartialEq)]
pub struct CcsTech {
    pub id: String,
    /// Fraction of the retrofitted stream's CO2 removed, per period.
    pub removal_ratio: Vec<f64>,
    /// Fraction of retrofitted generation consumed by the capture process.
    pub parasitic_loss: Vec<f64>,
    /// Generation cost of the retrofitted stream, mil USD/TWh.
    pub gen_cost: Vec<f64>,
    /// Lump fixed charge per plant deploying the tech, mil USD.
    pub fixed_cost: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuelPhase {
    Solid,
    Gas,
}

impl fmt::Display for FuelPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuelPhase::Solid => write!(f, "SOLID"),
            FuelPhase::Gas => write!(f, "GAS"),
        }
    }
}

/// A low-carbon substitute fuel. Solid-phase fuels displace coal, gas-phase
/// fuels displace natural gas.
#[derive(Debug, Clone, PartialEq)]
pub struct AltFuel {
    pub id: String,
    pub phase: FuelPhase,
    /// Mt CO2 per TWh generated on the substitute fuel.
    pub co2_intensity: Vec<f64>,
    /// Fuel cost, mil USD/TWh.
    pub cost: Vec<f64>,
    /// Lump fixed charge per plant deploying the fuel, mil USD.
    pub fixed_cost: Vec<f64>,
}

/// A standalone renewable generation technology (not tied to a plant).
#[derive(Debug, Clone, PartialEq)]
pub struct RenewableTech {
    pub id: String,
    pub co2_intensity: Vec<f64>,
    pub op_cost: Vec<f64>,
    /// Deployment ceiling per period, TWh/y.
    pub availability_cap: Vec<f64>,
    pub fixed_capex: Vec<f64>,
    pub capacity_capex: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetKind {
    /// Produces energy while removing CO2 (e.g. BECCS, biochar).
    EnergyProducing,
    /// Consumes energy while removing CO2 (e.g. direct air capture).
    EnergyConsuming,
}

/// A negative-emissions technology. CO2 intensities are negative: deploying
/// the technology removes CO2 from the period total.
#[derive(Debug, Clone, PartialEq)]
pub struct NetTech {
    pub id: String,
    pub kind: NetKind,
    pub co2_intensity: Vec<f64>,
    pub op_cost: Vec<f64>,
    pub availability_cap: Vec<f64>,
    pub fixed_capex: Vec<f64>,
    pub capacity_capex: Vec<f64>,
}

/// Demand, emissions limit and budget of one period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodParams {
    /// TWh/y.
    pub demand: f64,
    /// Mt/y.
    pub emission_limit: f64,
    /// mil USD/y.
    pub budget: f64,
}

/// Per-period YES/NO readiness flags for every non-plant technology.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AvailabilityMatrix {
    flags: BTreeMap<String, Vec<bool>>,
}

impl AvailabilityMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, tech_id: &str, per_period: Vec<bool>) {
        self.flags.insert(tech_id.to_string(), per_period);
    }

    /// Whether `tech_id` may be deployed in 1-based period `k`.
    /// Technologies without a row are treated as never available.
    pub fn available(&self, tech_id: &str, k: usize) -> bool {
        self.flags
            .get(tech_id)
            .and_then(|row| row.get(k - 1))
            .copied()
            .unwrap_or(false)
    }

    pub fn row(&self, tech_id: &str) -> Option<&[bool]> {
        self.flags.get(tech_id).map(|v| v.as_slice())
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.flags.keys().map(|s| s.as_str())
    }
}

/// The full planning problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub horizon: PlanningHorizon,
    pub plants: Vec<PowerPlant>,
    pub ccs_techs: Vec<CcsTech>,
    pub alt_fuels: Vec<AltFuel>,
    pub renewables: Vec<RenewableTech>,
    pub nets: Vec<NetTech>,
    pub period_params: Vec<PeriodParams>,
    pub availability: AvailabilityMatrix,
    /// Annualised cost factor scaling fixed and capacity-dependent capital
    /// charges. Dimensionless; defaults to 1.0 when a workbook omits it.
    pub aff: f64,
}

impl Instance {
    pub fn num_periods(&self) -> usize {
        self.horizon.num_periods
    }

    pub fn alt_solid_fuels(&self) -> impl Iterator<Item = (usize, &AltFuel)> {
        self.alt_fuels
            .iter()
            .enumerate()
            .filter(|(_, f)| f.phase == FuelPhase::Solid)
    }

    pub fn alt_gas_fuels(&self) -> impl Iterator<Item = (usize, &AltFuel)> {
        self.alt_fuels
            .iter()
            .enumerate()
            .filter(|(_, f)| f.phase == FuelPhase::Gas)
    }

    pub fn ep_nets(&self) -> impl Iterator<Item = (usize, &NetTech)> {
        self.nets
            .iter()
            .enumerate()
            .filter(|(_, n)| n.kind == NetKind::EnergyProducing)
    }

    pub fn ec_nets(&self) -> impl Iterator<Item = (usize, &NetTech)> {
        self.nets
            .iter()
            .enumerate()
            .filter(|(_, n)| n.kind == NetKind::EnergyConsuming)
    }
}

/// One broken rule, located by table, row and column so front ends can point
/// at the offending workbook cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub table: String,
    pub row: String,
    pub column: String,
    pub message: String,
}

impl Violation {
    fn new(table: &str, row: &str, column: &str, message: impl Into<String>) -> Self {
        Self {
            table: table.to_string(),
            row: row.to_string(),
            column: column.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {} / {}: {}", self.table, self.row, self.column, self.message)
    }
}

fn check_series(
    out: &mut Vec<Violation>,
    table: &str,
    row: &str,
    column: &str,
    series: &[f64],
    num_periods: usize,
    ok: impl Fn(f64) -> bool,
    rule: &str,
) {
    if series.len() != num_periods {
        out.push(Violation::new(
            table,
            row,
            column,
            format!("expected {} period values, found {}", num_periods, series.len()),
        ));
        return;
    }
    for (k, &v) in series.iter().enumerate() {
        if !v.is_finite() {
            out.push(Violation::new(table, row, &format!("{column}[{}]", k + 1), "value is not finite"));
        } else if !ok(v) {
            out.push(Violation::new(
                table,
                row,
                &format!("{column}[{}]", k + 1),
                format!("{rule} (found {v})"),
            ));
        }
    }
}

fn check_unique_ids<'a>(
    out: &mut Vec<Violation>,
    table: &str,
    ids: impl Iterator<Item = &'a str>,
) {
    let mut seen = BTreeMap::new();
    for id in ids {
        *seen.entry(id).or_insert(0usize) += 1;
    }
    for (id, count) in seen {
        if count > 1 {
            out.push(Violation::new(table, id, "id", format!("duplicate id ({count} rows)")));
        }
    }
}

/// Checks every instance invariant and returns the violations found.
///
/// An empty list means the instance is safe to hand to the model builder.
pub fn validate_instance(instance: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let kk = instance.horizon.num_periods;

    if kk < 1 || kk > MAX_PERIODS {
        out.push(Violation::new(
            "RUN_CONFIG",
            "num_periods",
            "value",
            format!("number of periods must be between 1 and {MAX_PERIODS}, found {kk}"),
        ));
    }
    if let Some(labels) = &instance.horizon.period_labels {
        if labels.len() != kk {
            out.push(Violation::new(
                "RUN_CONFIG",
                "period_labels",
                "value",
                format!("expected {kk} labels, found {}", labels.len()),
            ));
        }
    }

    check_unique_ids(&mut out, "PLANT_DATA", instance.plants.iter().map(|p| p.id.as_str()));
    for plant in &instance.plants {
        let t = "PLANT_DATA";
        let id = plant.id.as_str();
        if !(plant.lower_bound >= 0.0) {
            out.push(Violation::new(t, id, "lower_bound", "lower_bound must be >= 0"));
        }
        if plant.lower_bound > plant.upper_bound {
            out.push(Violation::new(
                t,
                id,
                "lower_bound",
                format!(
                    "lower_bound > upper_bound ({} > {})",
                    plant.lower_bound, plant.upper_bound
                ),
            ));
        }
        if !(plant.co2_intensity >= 0.0) {
            out.push(Violation::new(t, id, "co2_intensity", "co2_intensity must be >= 0"));
        }
        if plant.commission_period < 1 {
            out.push(Violation::new(t, id, "commission_period", "commission period must be >= 1"));
        }
        if plant.commission_period >= plant.decommission_period {
            out.push(Violation::new(
                t,
                id,
                "commission_period",
                format!(
                    "commission period must precede decommission period ({} >= {})",
                    plant.commission_period, plant.decommission_period
                ),
            ));
        }
        if plant.decommission_period > kk + 1 {
            out.push(Violation::new(
                t,
                id,
                "decommission_period",
                format!(
                    "decommission period must be at most num_periods+1 = {} (use that value for plants \
                     that are never decommissioned), found {}",
                    kk + 1,
                    plant.decommission_period
                ),
            ));
        }
        check_series(&mut out, "FUEL_COST_DATA", id, "op_cost", &plant.op_cost, kk, |_| true, "");
        check_series(&mut out, "CAPEX_DATA_1", id, "fixed_capex", &plant.fixed_capex, kk, |_| true, "");
        check_series(&mut out, "CAPEX_DATA_2", id, "capacity_capex", &plant.capacity_capex, kk, |_| true, "");
    }

    check_unique_ids(&mut out, "CCS_DATA", instance.ccs_techs.iter().map(|c| c.id.as_str()));
    for ccs in &instance.ccs_techs {
        let t = "CCS_DATA";
        check_series(
            &mut out,
            t,
            &ccs.id,
            "removal_ratio",
            &ccs.removal_ratio,
            kk,
            |v| v > 0.0 && v < 1.0,
            "removal ratio must lie strictly between 0 and 1",
        );
        check_series(
            &mut out,
            t,
            &ccs.id,
            "parasitic_loss",
            &ccs.parasitic_loss,
            kk,
            |v| (0.0..1.0).contains(&v),
            "parasitic power loss must lie in [0, 1)",
        );
        check_series(&mut out, t, &ccs.id, "gen_cost", &ccs.gen_cost, kk, |_| true, "");
        check_series(&mut out, t, &ccs.id, "fixed_cost", &ccs.fixed_cost, kk, |_| true, "");
    }

    check_unique_ids(&mut out, "ALT_FUEL", instance.alt_fuels.iter().map(|f| f.id.as_str()));
    for fuel in &instance.alt_fuels {
        let t = match fuel.phase {
            FuelPhase::Solid => "ALT_SOLID_CI",
            FuelPhase::Gas => "ALT_GAS_CI",
        };
        check_series(
            &mut out,
            t,
            &fuel.id,
            "co2_intensity",
            &fuel.co2_intensity,
            kk,
            |v| v >= 0.0,
            "alternative fuel CO2 intensity must be >= 0",
        );
        let tc = match fuel.phase {
            FuelPhase::Solid => "ALT_SOLID_COST",
            FuelPhase::Gas => "ALT_GAS_COST",
        };
        check_series(&mut out, tc, &fuel.id, "cost", &fuel.cost, kk, |_| true, "");
        check_series(&mut out, tc, &fuel.id, "fixed_cost", &fuel.fixed_cost, kk, |_| true, "");
    }

    check_unique_ids(&mut out, "RENEWABLE_CI_DATA", instance.renewables.iter().map(|r| r.id.as_str()));
    for ren in &instance.renewables {
        check_series(
            &mut out,
            "RENEWABLE_CI_DATA",
            &ren.id,
            "co2_intensity",
            &ren.co2_intensity,
            kk,
            |v| v >= 0.0,
            "renewable CO2 intensity must be >= 0",
        );
        check_series(&mut out, "RENEWABLE_COST_DATA", &ren.id, "op_cost", &ren.op_cost, kk, |_| true, "");
        check_series(
            &mut out,
            "RENEWABLE_CI_DATA",
            &ren.id,
            "availability_cap",
            &ren.availability_cap,
            kk,
            |v| v >= 0.0,
            "availability cap must be >= 0",
        );
        check_series(&mut out, "CAPEX_DATA_1", &ren.id, "fixed_capex", &ren.fixed_capex, kk, |_| true, "");
        check_series(&mut out, "CAPEX_DATA_2", &ren.id, "capacity_capex", &ren.capacity_capex, kk, |_| true, "");
    }

    check_unique_ids(&mut out, "NET_CI_DATA", instance.nets.iter().map(|n| n.id.as_str()));
    for net in &instance.nets {
        check_series(
            &mut out,
            "NET_CI_DATA",
            &net.id,
            "co2_intensity",
            &net.co2_intensity,
            kk,
            |v| v < 0.0,
            "NET CO2 intensity must be negative (the technology removes CO2)",
        );
        check_series(&mut out, "NET_COST_DATA", &net.id, "op_cost", &net.op_cost, kk, |_| true, "");
        check_series(
            &mut out,
            "NET_CI_DATA",
            &net.id,
            "availability_cap",
            &net.availability_cap,
            kk,
            |v| v >= 0.0,
            "availability cap must be >= 0",
        );
        check_series(&mut out, "CAPEX_DATA_1", &net.id, "fixed_capex", &net.fixed_capex, kk, |_| true, "");
        check_series(&mut out, "CAPEX_DATA_2", &net.id, "capacity_capex", &net.capacity_capex, kk, |_| true, "");
    }

    if instance.period_params.len() != kk {
        out.push(Violation::new(
            "ENERGY_PLANNING_DATA",
            "periods",
            "count",
            format!("expected {} period columns, found {}", kk, instance.period_params.len()),
        ));
    }
    for (k, params) in instance.period_params.iter().enumerate() {
        let col = format!("{}", k + 1);
        if !(params.demand >= 0.0) {
            out.push(Violation::new("ENERGY_PLANNING_DATA", "DEMAND", &col, "demand must be >= 0"));
        }
        if !(params.budget >= 0.0) {
            out.push(Violation::new("ENERGY_PLANNING_DATA", "BUDGET", &col, "budget must be >= 0"));
        }
        if !params.emission_limit.is_finite() {
            out.push(Violation::new(
                "ENERGY_PLANNING_DATA",
                "EMISSIONS_LIMIT",
                &col,
                "emissions limit must be finite",
            ));
        }
    }

    // Every non-plant technology needs a complete availability row.
    let tech_ids = instance
        .ccs_techs
        .iter()
        .map(|c| c.id.as_str())
        .chain(instance.alt_fuels.iter().map(|f| f.id.as_str()))
        .chain(instance.renewables.iter().map(|r| r.id.as_str()))
        .chain(instance.nets.iter().map(|n| n.id.as_str()));
    for id in tech_ids {
        match instance.availability.row(id) {
            None => out.push(Violation::new(
                "TECH_IMPLEMENTATION_TIME",
                id,
                "-",
                "technology has no availability row",
            )),
            Some(row) if row.len() != kk => out.push(Violation::new(
                "TECH_IMPLEMENTATION_TIME",
                id,
                "-",
                format!("expected {} period flags, found {}", kk, row.len()),
            )),
            Some(_) => {}
        }
    }

    out
}
