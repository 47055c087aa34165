//! Quick timing probe for the default instance scenarios.

use std::time::Instant;

use solnet::model::Scenario;
use solnet::scenarios::{run_scenario, ScenarioOptions};
use solnet::{default_small_instance, size_instance, SizingConfig};

fn main() {
    let inst = default_small_instance(1);
    let sized = size_instance(&inst, &SizingConfig::default());
    let model = solnet::build_pl(&inst, &sized).unwrap();
    println!(
        "default instance: {} vars, {} rows",
        model.problem.n_vars(),
        model.problem.n_rows()
    );

    let opts = ScenarioOptions::default();
    for which in [
        Scenario::P1,
        Scenario::P2,
        Scenario::P3,
        Scenario::P4,
        Scenario::P5,
        Scenario::Pfs,
        Scenario::Pl,
    ] {
        let t0 = Instant::now();
        match run_scenario(&inst, which, &opts) {
            Ok(res) => {
                let f = res.final_solution();
                println!(
                    "{:>4}: cost {:>10.2} $ (capital {:>8.2}, grid {:>8.2})  nodes {:>6}  gap {:.2e}  {:>6.2?}",
                    which.to_string(),
                    res.total_cost,
                    res.capital_cost,
                    res.grid_cost,
                    f.node_count,
                    f.rel_gap.unwrap_or(f64::NAN),
                    t0.elapsed()
                );
                println!(
                    "      energy: antenna {:.1} MWh, installed {:.1}, used {:.1}, lost {:.1}, unit {:?} $/kWh, solar stations {}",
                    res.energy.antenna_mwh,
                    res.energy.installed_solar_mwh,
                    res.energy.used_solar_mwh,
                    res.energy.lost_solar_mwh,
                    res.energy.unit_solar_cost,
                    res.schedules.install.iter().filter(|&&z| z == 1).count(),
                );
            }
            Err(e) => println!("{:>4}: ERROR {e}", which.to_string()),
        }
    }
}
