//! Converts solver output back into domain terms and audits it.
//!
//! Everything reported here is recomputed from the instance data and the
//! primal flow values; the auxiliary MILP variables (period emissions and
//! cost totals) are never copied into reports. [`audit_feasibility`] is the
//! artifact's main correctness oracle: it re-evaluates every constraint
//! family from scratch, sharing no code with the model builder's row
//! assembly, so a coefficient bug there cannot certify itself.

use std::fmt;

use thiserror::Error;

use crate::domain::{Instance, PlantCategory, FuelKind};
use crate::model::{retrofit_intensity, Objective, VarKey, VariableCatalog};
use crate::solver::{MilpSolution, MilpStatus};

/// Residuals above this are reported as violations.
pub const AUDIT_TOL: f64 = 1e-6;

/// Primal variable values addressed by domain key.
#[derive(Debug, Clone)]
pub struct PrimalFlows {
    catalog: VariableCatalog,
    values: Vec<f64>,
}

impl PrimalFlows {
    pub fn new(catalog: VariableCatalog, values: Vec<f64>) -> Self {
        debug_assert_eq!(catalog.len(), values.len());
        Self { catalog, values }
    }

    pub fn value(&self, key: VarKey) -> f64 {
        self.values[self.catalog.index(key)]
    }

    /// Overwrite one value (used by audit tests to inject faults).
    pub fn set_value(&mut self, key: VarKey, value: f64) {
        let idx = self.catalog.index(key);
        self.values[idx] = value;
    }

    pub fn catalog(&self) -> &VariableCatalog {
        &self.catalog
    }
}

/// A solved plan: the solver result plus what is needed to decode it.
#[derive(Debug, Clone)]
pub struct SolvedPlan {
    pub objective: Objective,
    pub aff: f64,
    pub milp: MilpSolution,
    pub catalog: VariableCatalog,
}

impl SolvedPlan {
    /// Decoded flows, when the solve produced an assignment.
    pub fn flows(&self) -> Option<PrimalFlows> {
        self.milp
            .values
            .as_ref()
            .map(|v| PrimalFlows::new(self.catalog.clone(), v.clone()))
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no reports for a non-optimal solve (status {0:?})")]
    NotOptimal(MilpStatus),
}

/// One plant's row of a period report.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantRow {
    pub plant_id: String,
    pub fuel: String,
    /// Gross generation, TWh/y.
    pub gross: f64,
    /// Gross energy routed through each CCS tech, instance order.
    pub retrofit: Vec<f64>,
    /// Generation on each alternative solid fuel, instance subset order.
    pub alt_solid: Vec<f64>,
    /// Generation on each alternative gas fuel.
    pub alt_gas: Vec<f64>,
    /// Delivered energy after parasitic losses.
    pub net: f64,
    /// Mt CO2 attributed to the plant.
    pub co2: f64,
    /// mil USD attributed to the plant (all streams, capex included).
    pub cost: f64,
}

/// One standalone technology's row (renewable or NET).
#[derive(Debug, Clone, PartialEq)]
pub struct TechRow {
    pub tech_id: String,
    /// Energy delivered; negative for energy-consuming NETs.
    pub energy: f64,
    pub co2: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostBreakdown {
    pub operating: f64,
    pub fixed_capex: f64,
    pub capacity_capex: f64,
}

/// Everything the results table shows for one period.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodReport {
    pub period: usize,
    pub plants: Vec<PlantRow>,
    pub renewables: Vec<TechRow>,
    pub ep_nets: Vec<TechRow>,
    pub ec_nets: Vec<TechRow>,
    /// Recomputed period CO2 load, Mt/y.
    pub emissions_total: f64,
    /// Recomputed period cost, mil USD/y.
    pub cost_total: f64,
    pub cost_breakdown: CostBreakdown,
    pub demand: f64,
    pub emission_limit: f64,
    pub budget: f64,
    /// Whether the CO2 load stays within the period limit.
    pub limit_satisfied: bool,
}

/// Builds the per-period reports from an optimal solve.
pub fn extract_reports(instance: &Instance, plan: &SolvedPlan) -> Result<Vec<PeriodReport>, ReportError> {
    if plan.milp.status != MilpStatus::Optimal {
        return Err(ReportError::NotOptimal(plan.milp.status));
    }
    let flows = plan.flows().expect("optimal solve carries values");
    Ok((1..=instance.num_periods())
        .map(|k| period_report(instance, plan.aff, &flows, k))
        .collect())
}

fn period_report(instance: &Instance, aff: f64, flows: &PrimalFlows, k: usize) -> PeriodReport {
    let mut breakdown = CostBreakdown::default();
    let mut emissions_total = 0.0;
    let mut cost_total = 0.0;

    let plants = instance
        .plants
        .iter()
        .enumerate()
        .map(|(i, plant)| {
            let gross = flows.value(VarKey::GrossGen { plant: i, period: k });
            let unabated = flows.value(VarKey::UnabatedNet { plant: i, period: k });
            let on = flows.value(VarKey::PlantOn { plant: i, period: k });
            let mut net = unabated;
            let mut co2 = unabated * plant.co2_intensity;
            let mut operating = unabated * plant.op_cost[k - 1];
            let mut fixed = aff * on * plant.fixed_capex[k - 1];
            let capacity = aff * unabated * plant.capacity_capex[k - 1];

            let retrofit: Vec<f64> = instance
                .ccs_techs
                .iter()
                .enumerate()
                .map(|(n, ccs)| {
                    let fr = flows.value(VarKey::RetrofitGross { plant: i, period: k, ccs: n });
                    let fnr = fr * (1.0 - ccs.parasitic_loss[k - 1]);
                    let cr = retrofit_intensity(
                        plant.co2_intensity,
                        ccs.removal_ratio[k - 1],
                        ccs.parasitic_loss[k - 1],
                    );
                    net += fnr;
                    co2 += fnr * cr;
                    operating += fnr * ccs.gen_cost[k - 1];
                    fixed += aff
                        * flows.value(VarKey::RetrofitOn { plant: i, period: k, ccs: n })
                        * ccs.fixed_cost[k - 1];
                    fr
                })
                .collect();

            let alt_solid: Vec<f64> = instance
                .alt_solid_fuels()
                .map(|(s, fuel)| {
                    let fas = flows.value(VarKey::AltSolid { plant: i, period: k, fuel: s });
                    net += fas;
                    co2 += fas * fuel.co2_intensity[k - 1];
                    operating += fas * fuel.cost[k - 1];
                    fixed += aff
                        * flows.value(VarKey::AltSolidOn { plant: i, period: k, fuel: s })
                        * fuel.fixed_cost[k - 1];
                    fas
                })
                .collect();
            let alt_gas: Vec<f64> = instance
                .alt_gas_fuels()
                .map(|(g, fuel)| {
                    let fag = flows.value(VarKey::AltGas { plant: i, period: k, fuel: g });
                    net += fag;
                    co2 += fag * fuel.co2_intensity[k - 1];
                    operating += fag * fuel.cost[k - 1];
                    fixed += aff
                        * flows.value(VarKey::AltGasOn { plant: i, period: k, fuel: g })
                        * fuel.fixed_cost[k - 1];
                    fag
                })
                .collect();

            emissions_total += co2;
            breakdown.operating += operating;
            breakdown.fixed_capex += fixed;
            breakdown.capacity_capex += capacity;
            let cost = operating + fixed + capacity;
            cost_total += cost;
            PlantRow {
                plant_id: plant.id.clone(),
                fuel: plant.fuel.name().to_string(),
                gross,
                retrofit,
                alt_solid,
                alt_gas,
                net,
                co2,
                cost,
            }
        })
        .collect();

    let mut tech_row = |energy: f64, ci: f64, op: f64, on: f64, fixed_capex: f64, capacity_capex: f64, id: &str| {
        let co2 = energy.abs() * ci;
        let operating = energy.abs() * op;
        let fixed = aff * on * fixed_capex;
        let capacity = aff * energy.abs() * capacity_capex;
        emissions_total += co2;
        breakdown.operating += operating;
        breakdown.fixed_capex += fixed;
        breakdown.capacity_capex += capacity;
        let cost = operating + fixed + capacity;
        cost_total += cost;
        TechRow { tech_id: id.to_string(), energy, co2, cost }
    };

    let renewables = instance
        .renewables
        .iter()
        .enumerate()
        .map(|(r, tech)| {
            let fc = flows.value(VarKey::RenewableGen { period: k, tech: r });
            let on = flows.value(VarKey::RenewableOn { period: k, tech: r });
            tech_row(
                fc,
                tech.co2_intensity[k - 1],
                tech.op_cost[k - 1],
                on,
                tech.fixed_capex[k - 1],
                tech.capacity_capex[k - 1],
                &tech.id,
            )
        })
        .collect();
    let ep_nets = instance
        .ep_nets()
        .map(|(p, tech)| {
            let fep = flows.value(VarKey::EpNetGen { period: k, tech: p });
            let on = flows.value(VarKey::EpNetOn { period: k, tech: p });
            tech_row(
                fep,
                tech.co2_intensity[k - 1],
                tech.op_cost[k - 1],
                on,
                tech.fixed_capex[k - 1],
                tech.capacity_capex[k - 1],
                &tech.id,
            )
        })
        .collect();
    let ec_nets = instance
        .ec_nets()
        .map(|(q, tech)| {
            let fec = flows.value(VarKey::EcNetGen { period: k, tech: q });
            let on = flows.value(VarKey::EcNetOn { period: k, tech: q });
            // Consumption: report the energy draw as negative.
            tech_row(
                -fec,
                tech.co2_intensity[k - 1],
                tech.op_cost[k - 1],
                on,
                tech.fixed_capex[k - 1],
                tech.capacity_capex[k - 1],
                &tech.id,
            )
        })
        .collect();

    let params = instance.period_params[k - 1];
    PeriodReport {
        period: k,
        plants,
        renewables,
        ep_nets,
        ec_nets,
        emissions_total,
        cost_total,
        cost_breakdown: breakdown,
        demand: params.demand,
        emission_limit: params.emission_limit,
        budget: params.budget,
        limit_satisfied: emissions_total <= params.emission_limit + AUDIT_TOL,
    }
}

/// Per-period roll-up of the reports, ready to serialise.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub period: usize,
    pub demand: f64,
    pub emissions: f64,
    pub emission_limit: f64,
    pub limit_satisfied: bool,
    pub cumulative_emissions: f64,
    pub cost: f64,
    pub budget: f64,
    pub budget_satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
}

pub fn summarize(reports: &[PeriodReport]) -> Summary {
    let mut cumulative = 0.0;
    Summary {
        rows: reports
            .iter()
            .map(|r| {
                cumulative += r.emissions_total;
                SummaryRow {
                    period: r.period,
                    demand: r.demand,
                    emissions: r.emissions_total,
                    emission_limit: r.emission_limit,
                    limit_satisfied: r.limit_satisfied,
                    cumulative_emissions: cumulative,
                    cost: r.cost_total,
                    budget: r.budget,
                    budget_satisfied: r.cost_total <= r.budget + AUDIT_TOL,
                }
            })
            .collect(),
    }
}

/// One constraint-family violation found by the auditor.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationViolation {
    /// Equation family tag, e.g. `"Eq. 10"`, or `"availability"`.
    pub equation: String,
    /// Offending entity and period, e.g. `"PLANT_3, period 4, CCS_1"`.
    pub location: String,
    pub residual: f64,
}

impl fmt::Display for EquationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: residual {:.3e}", self.equation, self.location, self.residual)
    }
}

struct Auditor {
    out: Vec<EquationViolation>,
}

impl Auditor {
    fn flag(&mut self, equation: &str, location: String, residual: f64) {
        if residual > AUDIT_TOL {
            self.out.push(EquationViolation {
                equation: equation.to_string(),
                location,
                residual,
            });
        }
    }
}

/// Re-evaluates every constraint family against the instance data and
/// reports residuals above [`AUDIT_TOL`]. The objective decides whether the
/// emission caps or the budget caps are in force.
pub fn audit_feasibility(
    instance: &Instance,
    objective: Objective,
    flows: &PrimalFlows,
) -> Vec<EquationViolation> {
    let kk = instance.num_periods();
    let mut a = Auditor { out: Vec::new() };
    let f = flows;

    for k in 1..=kk {
        let params = instance.period_params[k - 1];

        // Demand met exactly by gross plant generation.
        let gross_sum: f64 = (0..instance.plants.len())
            .map(|i| f.value(VarKey::GrossGen { plant: i, period: k }))
            .sum();
        a.flag("Eq. 1", format!("period {k}"), (gross_sum - params.demand).abs());

        for (i, plant) in instance.plants.iter().enumerate() {
            let loc = |detail: &str| format!("{}, period {k}{detail}", plant.id);
            let gross = f.value(VarKey::GrossGen { plant: i, period: k });
            let on = f.value(VarKey::PlantOn { plant: i, period: k });
            let unabated = f.value(VarKey::UnabatedNet { plant: i, period: k });

            a.flag("Eq. 2", loc(""), plant.lower_bound * on - gross);
            a.flag("Eq. 3", loc(""), gross - plant.upper_bound * on);

            if !plant.commissioned_in(k) {
                a.flag("Eq. 4", loc(""), gross.abs());
                let mut attached = 0.0;
                for n in 0..instance.ccs_techs.len() {
                    attached += f.value(VarKey::RetrofitGross { plant: i, period: k, ccs: n }).abs();
                }
                for (s, _) in instance.alt_solid_fuels() {
                    attached += f.value(VarKey::AltSolid { plant: i, period: k, fuel: s }).abs();
                }
                for (g, _) in instance.alt_gas_fuels() {
                    attached += f.value(VarKey::AltGas { plant: i, period: k, fuel: g }).abs();
                }
                a.flag("Eq. 4", loc(", mitigation streams"), attached);
            }

            if k < kk && plant.commissioned_in(k) && plant.commissioned_in(k + 1) {
                let next = f.value(VarKey::GrossGen { plant: i, period: k + 1 });
                a.flag("Eq. 5", loc(""), gross - next);
                for (n, ccs) in instance.ccs_techs.iter().enumerate() {
                    let cur = f.value(VarKey::RetrofitGross { plant: i, period: k, ccs: n });
                    let nxt = f.value(VarKey::RetrofitGross { plant: i, period: k + 1, ccs: n });
                    a.flag("Eq. 9", loc(&format!(", {}", ccs.id)), cur - nxt);
                }
                for (s, fuel) in instance.alt_solid_fuels() {
                    let cur = f.value(VarKey::AltSolid { plant: i, period: k, fuel: s });
                    let nxt = f.value(VarKey::AltSolid { plant: i, period: k + 1, fuel: s });
                    a.flag("Eq. 11", loc(&format!(", {}", fuel.id)), cur - nxt);
                }
                for (g, fuel) in instance.alt_gas_fuels() {
                    let cur = f.value(VarKey::AltGas { plant: i, period: k, fuel: g });
                    let nxt = f.value(VarKey::AltGas { plant: i, period: k + 1, fuel: g });
                    a.flag("Eq. 12", loc(&format!(", {}", fuel.id)), cur - nxt);
                }
            }

            let mut retrofit_sum = 0.0;
            for (n, ccs) in instance.ccs_techs.iter().enumerate() {
                let fr = f.value(VarKey::RetrofitGross { plant: i, period: k, ccs: n });
                let fnr = f.value(VarKey::RetrofitNet { plant: i, period: k, ccs: n });
                let b_on = f.value(VarKey::RetrofitOn { plant: i, period: k, ccs: n });
                retrofit_sum += fr;
                a.flag("Eq. 7", loc(&format!(", {}", ccs.id)), fr - plant.upper_bound * b_on);
                a.flag(
                    "Eq. 10",
                    loc(&format!(", {}", ccs.id)),
                    (fnr - fr * (1.0 - ccs.parasitic_loss[k - 1])).abs(),
                );
                if plant.category != PlantCategory::Fossil
                    || !instance.availability.available(&ccs.id, k)
                {
                    a.flag("availability", loc(&format!(", {}", ccs.id)), fr.abs());
                }
            }
            a.flag("Eq. 8", loc(""), retrofit_sum - gross);

            let mut stream_sum = unabated + retrofit_sum;
            for (s, fuel) in instance.alt_solid_fuels() {
                let fas = f.value(VarKey::AltSolid { plant: i, period: k, fuel: s });
                let g_on = f.value(VarKey::AltSolidOn { plant: i, period: k, fuel: s });
                stream_sum += fas;
                a.flag("Eq. 13", loc(&format!(", {}", fuel.id)), fas - plant.upper_bound * g_on);
                if plant.fuel != FuelKind::Coal || !instance.availability.available(&fuel.id, k) {
                    a.flag("availability", loc(&format!(", {}", fuel.id)), fas.abs());
                }
            }
            for (g, fuel) in instance.alt_gas_fuels() {
                let fag = f.value(VarKey::AltGas { plant: i, period: k, fuel: g });
                let h_on = f.value(VarKey::AltGasOn { plant: i, period: k, fuel: g });
                stream_sum += fag;
                a.flag("Eq. 14", loc(&format!(", {}", fuel.id)), fag - plant.upper_bound * h_on);
                if plant.fuel != FuelKind::NaturalGas
                    || !instance.availability.available(&fuel.id, k)
                {
                    a.flag("availability", loc(&format!(", {}", fuel.id)), fag.abs());
                }
            }
            a.flag("Eq. 15", loc(""), (stream_sum - gross).abs());
        }

        // Standalone technology caps, availability and the system balance.
        let mut balance = 0.0;
        for i in 0..instance.plants.len() {
            balance += f.value(VarKey::UnabatedNet { plant: i, period: k });
            for n in 0..instance.ccs_techs.len() {
                balance += f.value(VarKey::RetrofitNet { plant: i, period: k, ccs: n });
            }
            for (s, _) in instance.alt_solid_fuels() {
                balance += f.value(VarKey::AltSolid { plant: i, period: k, fuel: s });
            }
            for (g, _) in instance.alt_gas_fuels() {
                balance += f.value(VarKey::AltGas { plant: i, period: k, fuel: g });
            }
        }
        for (r, tech) in instance.renewables.iter().enumerate() {
            let fc = f.value(VarKey::RenewableGen { period: k, tech: r });
            let on = f.value(VarKey::RenewableOn { period: k, tech: r });
            a.flag(
                "Eq. 16",
                format!("{}, period {k}", tech.id),
                fc - tech.availability_cap[k - 1] * on,
            );
            if !instance.availability.available(&tech.id, k) {
                a.flag("availability", format!("{}, period {k}", tech.id), fc.abs());
            }
            if k < kk {
                let next = f.value(VarKey::RenewableGen { period: k + 1, tech: r });
                a.flag("Eq. 19", format!("{}, period {k}", tech.id), fc - next);
            }
            balance += fc;
        }
        for (p, tech) in instance.ep_nets() {
            let fep = f.value(VarKey::EpNetGen { period: k, tech: p });
            let on = f.value(VarKey::EpNetOn { period: k, tech: p });
            a.flag(
                "Eq. 17",
                format!("{}, period {k}", tech.id),
                fep - tech.availability_cap[k - 1] * on,
            );
            if !instance.availability.available(&tech.id, k) {
                a.flag("availability", format!("{}, period {k}", tech.id), fep.abs());
            }
            if k < kk {
                let next = f.value(VarKey::EpNetGen { period: k + 1, tech: p });
                a.flag("Eq. 20", format!("{}, period {k}", tech.id), fep - next);
            }
            balance += fep;
        }
        for (q, tech) in instance.ec_nets() {
            let fec = f.value(VarKey::EcNetGen { period: k, tech: q });
            let on = f.value(VarKey::EcNetOn { period: k, tech: q });
            a.flag(
                "Eq. 18",
                format!("{}, period {k}", tech.id),
                fec - tech.availability_cap[k - 1] * on,
            );
            if !instance.availability.available(&tech.id, k) {
                a.flag("availability", format!("{}, period {k}", tech.id), fec.abs());
            }
            if k < kk {
                let next = f.value(VarKey::EcNetGen { period: k + 1, tech: q });
                a.flag("Eq. 21", format!("{}, period {k}", tech.id), fec - next);
            }
            balance -= fec;
        }
        a.flag("Eq. 22", format!("period {k}"), (balance - params.demand).abs());

        // CO2 load definition against the solver's own total.
        let te_var = f.value(VarKey::PeriodEmissions { period: k });
        a.flag(
            "Eq. 23",
            format!("period {k}"),
            (recompute_emissions(instance, f, k) - te_var).abs(),
        );

        match objective {
            Objective::MinBudget => {
                a.flag("Eq. 29", format!("period {k}"), te_var - params.emission_limit);
            }
            Objective::MinEmission => {
                let tc_var = f.value(VarKey::PeriodCost { period: k });
                a.flag("Eq. 30", format!("period {k}"), tc_var - params.budget);
            }
        }
    }

    a.out
}

/// Period CO2 load recomputed from the flows alone (the Eq. 23 right-hand
/// side), never read from the solver's emissions variable.
pub fn recompute_emissions(instance: &Instance, flows: &PrimalFlows, k: usize) -> f64 {
    let mut total = 0.0;
    for (i, plant) in instance.plants.iter().enumerate() {
        total += flows.value(VarKey::UnabatedNet { plant: i, period: k }) * plant.co2_intensity;
        for (n, ccs) in instance.ccs_techs.iter().enumerate() {
            let cr = retrofit_intensity(
                plant.co2_intensity,
                ccs.removal_ratio[k - 1],
                ccs.parasitic_loss[k - 1],
            );
            total += flows.value(VarKey::RetrofitNet { plant: i, period: k, ccs: n }) * cr;
        }
        for (s, fuel) in instance.alt_solid_fuels() {
            total += flows.value(VarKey::AltSolid { plant: i, period: k, fuel: s })
                * fuel.co2_intensity[k - 1];
        }
        for (g, fuel) in instance.alt_gas_fuels() {
            total += flows.value(VarKey::AltGas { plant: i, period: k, fuel: g })
                * fuel.co2_intensity[k - 1];
        }
    }
    for (r, tech) in instance.renewables.iter().enumerate() {
        total += flows.value(VarKey::RenewableGen { period: k, tech: r }) * tech.co2_intensity[k - 1];
    }
    for (p, tech) in instance.ep_nets() {
        total += flows.value(VarKey::EpNetGen { period: k, tech: p }) * tech.co2_intensity[k - 1];
    }
    for (q, tech) in instance.ec_nets() {
        total += flows.value(VarKey::EcNetGen { period: k, tech: q }) * tech.co2_intensity[k - 1];
    }
    total
}

/// Full audit including the cost identities (Eqs. 24-28), which require the
/// annualised cost factor the model was built with.
pub fn audit_solution(
    instance: &Instance,
    objective: Objective,
    aff: f64,
    flows: &PrimalFlows,
) -> Vec<EquationViolation> {
    let mut out = audit_feasibility(instance, objective, flows);
    let kk = instance.num_periods();
    for k in 1..=kk {
        let report = period_report(instance, aff, flows, k);

        // Recompute the four subtotals the way the cost equations define
        // them, then compare against the solver's variables.
        let mut ctf = 0.0;
        for (i, plant) in instance.plants.iter().enumerate() {
            let unabated = flows.value(VarKey::UnabatedNet { plant: i, period: k });
            let on = flows.value(VarKey::PlantOn { plant: i, period: k });
            ctf += unabated * plant.op_cost[k - 1]
                + aff * on * plant.fixed_capex[k - 1]
                + aff * unabated * plant.capacity_capex[k - 1];
        }
        push_residual(&mut out, "Eq. 24", k, ctf - flows.value(VarKey::PlantCostTotal { period: k }));

        let mut ctc = 0.0;
        for (r, tech) in instance.renewables.iter().enumerate() {
            let fc = flows.value(VarKey::RenewableGen { period: k, tech: r });
            let on = flows.value(VarKey::RenewableOn { period: k, tech: r });
            ctc += fc * tech.op_cost[k - 1]
                + aff * on * tech.fixed_capex[k - 1]
                + aff * fc * tech.capacity_capex[k - 1];
        }
        push_residual(&mut out, "Eq. 25", k, ctc - flows.value(VarKey::RenewableCostTotal { period: k }));

        let mut ctep = 0.0;
        for (p, tech) in instance.ep_nets() {
            let fep = flows.value(VarKey::EpNetGen { period: k, tech: p });
            let on = flows.value(VarKey::EpNetOn { period: k, tech: p });
            ctep += fep * tech.op_cost[k - 1]
                + aff * on * tech.fixed_capex[k - 1]
                + aff * fep * tech.capacity_capex[k - 1];
        }
        push_residual(&mut out, "Eq. 26", k, ctep - flows.value(VarKey::EpNetCostTotal { period: k }));

        let mut ctec = 0.0;
        for (q, tech) in instance.ec_nets() {
            let fec = flows.value(VarKey::EcNetGen { period: k, tech: q });
            let on = flows.value(VarKey::EcNetOn { period: k, tech: q });
            ctec += fec * tech.op_cost[k - 1]
                + aff * on * tech.fixed_capex[k - 1]
                + aff * fec * tech.capacity_capex[k - 1];
        }
        push_residual(&mut out, "Eq. 27", k, ctec - flows.value(VarKey::EcNetCostTotal { period: k }));

        // Grand total: independent recomputation vs the TC variable.
        push_residual(
            &mut out,
            "Eq. 28",
            k,
            report.cost_total - flows.value(VarKey::PeriodCost { period: k }),
        );
    }
    out
}

fn push_residual(out: &mut Vec<EquationViolation>, equation: &str, period: usize, residual: f64) {
    if residual.abs() > AUDIT_TOL {
        out.push(EquationViolation {
            equation: equation.to_string(),
            location: format!("period {period}"),
            residual: residual.abs(),
        });
    }
}
