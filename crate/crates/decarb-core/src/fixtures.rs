//! Programmatic copy of the bundled six-period case study.
//!
//! The same data ships as CSV workbooks under `workbooks/`; the test suites
//! compare the parsed workbooks against these constructors so the two
//! encodings cannot drift apart. Scenario 1 and Scenario 2 share every table
//! except the technology availability matrix.

use crate::domain::*;

const K: usize = 6;

fn series(values: [f64; K]) -> Vec<f64> {
    values.to_vec()
}

fn flat(value: f64) -> Vec<f64> {
    vec![value; K]
}

fn plant(
    id: &str,
    category: PlantCategory,
    fuel: FuelKind,
    lower: f64,
    upper: f64,
    ci: f64,
    cm: usize,
    dcm: usize,
) -> PowerPlant {
    let op_cost = match fuel {
        FuelKind::NaturalGas => flat(25.0),
        FuelKind::Oil => flat(49.0),
        FuelKind::Coal => flat(12.0),
        FuelKind::Solar => series([40.0, 35.0, 25.0, 13.0, 8.0, 3.0]),
        _ => unreachable!("case study plants use solar, natural gas, oil or coal"),
    };
    let fixed_capex = match fuel {
        FuelKind::Solar => series([400.0, 350.0, 300.0, 250.0, 200.0, 150.0]),
        _ => flat(400.0),
    };
    let capacity_capex = match fuel {
        FuelKind::Solar => series([100.0, 85.0, 70.0, 55.0, 40.0, 25.0]),
        _ => flat(100.0),
    };
    PowerPlant {
        id: id.to_string(),
        category,
        fuel,
        lower_bound: lower,
        upper_bound: upper,
        co2_intensity: ci,
        commission_period: cm,
        decommission_period: dcm,
        op_cost,
        fixed_capex,
        capacity_capex,
    }
}

fn renewable(
    id: &str,
    ci: [f64; K],
    op_cost: [f64; K],
    fixed_capex: Vec<f64>,
    capacity_capex: Vec<f64>,
    caps: &[f64],
) -> RenewableTech {
    RenewableTech {
        id: id.to_string(),
        co2_intensity: series(ci),
        op_cost: series(op_cost),
        availability_cap: caps.to_vec(),
        fixed_capex,
        capacity_capex,
    }
}

fn net(id: &str, kind: NetKind, ci: [f64; K], op_cost: [f64; K], caps: &[f64]) -> NetTech {
    let (fixed, capacity) = match kind {
        NetKind::EnergyProducing => (flat(600.0), flat(150.0)),
        NetKind::EnergyConsuming => (flat(800.0), flat(200.0)),
    };
    NetTech {
        id: id.to_string(),
        kind,
        co2_intensity: series(ci),
        op_cost: series(op_cost),
        availability_cap: caps.to_vec(),
        fixed_capex: fixed,
        capacity_capex: capacity,
    }
}

fn alt_fuel(id: &str, phase: FuelPhase, ci: [f64; K], cost: [f64; K]) -> AltFuel {
    AltFuel {
        id: id.to_string(),
        phase,
        co2_intensity: series(ci),
        cost: series(cost),
        fixed_cost: flat(0.0),
    }
}

/// Demand series, also used as the per-period deployment ceiling for
/// renewables and NETs (no dedicated cap table exists; total demand is the
/// natural physical ceiling, and unavailable periods are fixed to zero via
/// the availability matrix anyway).
const DEMAND: [f64; K] = [60.0, 75.0, 90.0, 105.0, 120.0, 135.0];

fn base_instance() -> Instance {
    let caps = DEMAND;
    Instance {
        horizon: PlanningHorizon::new(K),
        plants: vec![
            plant("PLANT_1", PlantCategory::Renewable, FuelKind::Solar, 20.03, 26.70, 0.15, 1, 7),
            plant("PLANT_2", PlantCategory::Renewable, FuelKind::Solar, 15.98, 21.30, 0.15, 1, 7),
            plant("PLANT_3", PlantCategory::Fossil, FuelKind::NaturalGas, 5.13, 20.50, 0.50, 1, 7),
            plant("PLANT_4", PlantCategory::Fossil, FuelKind::NaturalGas, 3.48, 13.90, 0.50, 1, 7),
            plant("PLANT_5", PlantCategory::Fossil, FuelKind::NaturalGas, 4.20, 16.80, 0.50, 1, 7),
            plant("PLANT_6", PlantCategory::Fossil, FuelKind::Oil, 4.00, 16.00, 0.80, 1, 3),
            plant("PLANT_7", PlantCategory::Fossil, FuelKind::Coal, 6.68, 26.70, 1.00, 1, 5),
            plant("PLANT_8", PlantCategory::Fossil, FuelKind::Coal, 4.53, 18.10, 1.00, 1, 7),
            plant("PLANT_9", PlantCategory::Renewable, FuelKind::Solar, 15.00, 20.00, 0.15, 2, 7),
            plant("PLANT_10", PlantCategory::Renewable, FuelKind::Solar, 18.75, 25.00, 0.15, 4, 7),
        ],
        ccs_techs: vec![
            CcsTech {
                id: "CCS_1".into(),
                removal_ratio: series([0.85, 0.86, 0.87, 0.88, 0.89, 0.90]),
                parasitic_loss: series([0.15, 0.14, 0.13, 0.12, 0.11, 0.10]),
                gen_cost: series([34.0, 33.0, 32.0, 31.0, 30.0, 29.0]),
                fixed_cost: series([600.0, 590.0, 580.0, 570.0, 560.0, 550.0]),
            },
            CcsTech {
                id: "CCS_2".into(),
                removal_ratio: series([0.65, 0.66, 0.67, 0.68, 0.69, 0.70]),
                parasitic_loss: series([0.25, 0.24, 0.23, 0.22, 0.21, 0.20]),
                gen_cost: series([29.0, 28.0, 27.0, 26.0, 25.0, 24.0]),
                fixed_cost: series([550.0, 540.0, 530.0, 520.0, 510.0, 500.0]),
            },
        ],
        alt_fuels: vec![
            alt_fuel(
                "SOLID_1",
                FuelPhase::Solid,
                [0.20, 0.19, 0.18, 0.17, 0.16, 0.15],
                [20.0, 19.0, 18.0, 17.0, 16.0, 15.0],
            ),
            alt_fuel(
                "SOLID_2",
                FuelPhase::Solid,
                [0.40, 0.38, 0.36, 0.34, 0.32, 0.30],
                [15.0, 14.0, 13.0, 12.0, 11.0, 10.0],
            ),
            alt_fuel(
                "GAS_1",
                FuelPhase::Gas,
                [0.15, 0.14, 0.13, 0.12, 0.11, 0.10],
                [35.0, 34.0, 33.0, 32.0, 31.0, 30.0],
            ),
            alt_fuel(
                "GAS_2",
                FuelPhase::Gas,
                [0.25, 0.23, 0.21, 0.19, 0.17, 0.15],
                [30.0, 29.0, 28.0, 27.0, 26.0, 25.0],
            ),
        ],
        renewables: vec![
            renewable(
                "SOLAR",
                [0.10, 0.09, 0.08, 0.07, 0.06, 0.05],
                [40.0, 35.0, 25.0, 13.0, 8.0, 3.0],
                series([400.0, 350.0, 300.0, 250.0, 200.0, 150.0]),
                series([100.0, 85.0, 70.0, 55.0, 40.0, 25.0]),
                &caps,
            ),
            renewable(
                "HYDRO",
                [0.15, 0.14, 0.13, 0.12, 0.11, 0.10],
                [30.0, 29.0, 28.0, 27.0, 26.0, 25.0],
                series([400.0, 380.0, 360.0, 340.0, 320.0, 300.0]),
                series([100.0, 90.0, 80.0, 70.0, 60.0, 50.0]),
                &caps,
            ),
            renewable(
                "BIOMASS",
                [0.30, 0.28, 0.26, 0.24, 0.22, 0.20],
                [20.0, 18.0, 16.0, 14.0, 12.0, 10.0],
                flat(400.0),
                flat(100.0),
                &caps,
            ),
            renewable(
                "BIOGAS",
                [0.25, 0.23, 0.21, 0.19, 0.17, 0.15],
                [25.0, 23.0, 21.0, 19.0, 17.0, 15.0],
                flat(400.0),
                flat(100.0),
                &caps,
            ),
            renewable(
                "MSW",
                [0.30, 0.29, 0.28, 0.27, 0.26, 0.25],
                [20.0, 19.0, 18.0, 17.0, 16.0, 15.0],
                flat(400.0),
                flat(100.0),
                &caps,
            ),
        ],
        nets: vec![
            net(
                "EP_NETS_1",
                NetKind::EnergyProducing,
                [-0.80, -0.81, -0.82, -0.83, -0.84, -0.85],
                [43.0, 41.0, 39.0, 37.0, 35.0, 33.0],
                &caps,
            ),
            net(
                "EP_NETS_2",
                NetKind::EnergyProducing,
                [-0.60, -0.61, -0.62, -0.63, -0.64, -0.65],
                [40.0, 38.0, 36.0, 34.0, 32.0, 30.0],
                &caps,
            ),
            net(
                "EP_NETS_3",
                NetKind::EnergyProducing,
                [-0.40, -0.41, -0.42, -0.43, -0.44, -0.45],
                [37.0, 35.0, 33.0, 31.0, 29.0, 27.0],
                &caps,
            ),
            net(
                "EC_NETS_1",
                NetKind::EnergyConsuming,
                [-0.60, -0.61, -0.62, -0.63, -0.64, -0.65],
                [49.0, 47.0, 45.0, 43.0, 41.0, 39.0],
                &caps,
            ),
            net(
                "EC_NETS_2",
                NetKind::EnergyConsuming,
                [-0.40, -0.41, -0.42, -0.43, -0.44, -0.45],
                [37.0, 35.0, 33.0, 31.0, 29.0, 27.0],
                &caps,
            ),
            net(
                "EC_NETS_3",
                NetKind::EnergyConsuming,
                [-0.20, -0.21, -0.22, -0.23, -0.24, -0.25],
                [24.0, 22.0, 20.0, 18.0, 16.0, 14.0],
                &caps,
            ),
        ],
        period_params: DEMAND
            .iter()
            .zip([20.0, 18.0, 15.0, 11.0, 6.0, 0.0])
            .zip([3000.0, 3500.0, 4000.0, 4500.0, 5000.0, 5500.0])
            .map(|((&demand, emission_limit), budget)| PeriodParams {
                demand,
                emission_limit,
                budget,
            })
            .collect(),
        availability: AvailabilityMatrix::new(),
        aff: 1.0,
    }
}

fn availability(rows: &[(&str, [u8; K])]) -> AvailabilityMatrix {
    let mut matrix = AvailabilityMatrix::new();
    for (id, flags) in rows {
        matrix.set(id, flags.iter().map(|&f| f == 1).collect());
    }
    matrix
}

/// Scenario 1: the less ambitious technology portfolio. Only the dirtier
/// alternative-fuel and CCS options arrive (from period 3 and 4), and no
/// NETs become available at all.
pub fn scenario1() -> Instance {
    let mut instance = base_instance();
    instance.availability = availability(&[
        ("SOLAR", [1, 1, 1, 1, 1, 1]),
        ("HYDRO", [1, 1, 1, 1, 1, 1]),
        ("BIOMASS", [1, 1, 1, 1, 1, 1]),
        ("BIOGAS", [1, 1, 1, 1, 1, 1]),
        ("MSW", [0, 0, 0, 1, 1, 1]),
        ("SOLID_1", [0, 0, 0, 0, 0, 0]),
        ("SOLID_2", [0, 0, 1, 1, 1, 1]),
        ("GAS_1", [0, 0, 0, 0, 0, 0]),
        ("GAS_2", [0, 0, 1, 1, 1, 1]),
        ("CCS_1", [0, 0, 0, 0, 0, 0]),
        ("CCS_2", [0, 0, 0, 1, 1, 1]),
        ("EP_NETS_1", [0, 0, 0, 0, 0, 0]),
        ("EP_NETS_2", [0, 0, 0, 0, 0, 0]),
        ("EP_NETS_3", [0, 0, 0, 0, 0, 0]),
        ("EC_NETS_1", [0, 0, 0, 0, 0, 0]),
        ("EC_NETS_2", [0, 0, 0, 0, 0, 0]),
        ("EC_NETS_3", [0, 0, 0, 0, 0, 0]),
    ]);
    instance
}

/// Scenario 2: the aggressive portfolio. Every mitigation technology
/// eventually becomes available, NETs included.
pub fn scenario2() -> Instance {
    let mut instance = base_instance();
    instance.availability = availability(&[
        ("SOLAR", [1, 1, 1, 1, 1, 1]),
        ("HYDRO", [1, 1, 1, 1, 1, 1]),
        ("BIOMASS", [1, 1, 1, 1, 1, 1]),
        ("BIOGAS", [1, 1, 1, 1, 1, 1]),
        ("MSW", [0, 1, 1, 1, 1, 1]),
        ("SOLID_1", [0, 0, 1, 1, 1, 1]),
        ("SOLID_2", [0, 1, 1, 1, 1, 1]),
        ("GAS_1", [0, 0, 1, 1, 1, 1]),
        ("GAS_2", [0, 1, 1, 1, 1, 1]),
        ("CCS_1", [0, 0, 0, 1, 1, 1]),
        ("CCS_2", [0, 0, 1, 1, 1, 1]),
        ("EP_NETS_1", [0, 0, 0, 0, 1, 1]),
        ("EP_NETS_2", [0, 0, 0, 1, 1, 1]),
        ("EP_NETS_3", [0, 0, 1, 1, 1, 1]),
        ("EC_NETS_1", [0, 0, 0, 0, 1, 1]),
        ("EC_NETS_2", [0, 0, 0, 1, 1, 1]),
        ("EC_NETS_3", [0, 0, 1, 1, 1, 1]),
    ]);
    instance
}
