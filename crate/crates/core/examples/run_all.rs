use isolab::harness::{run_experiment, ExperimentName, ExperimentSpec};

fn main() {
    for name in ExperimentName::ALL {
        let r = run_experiment(&ExperimentSpec::new(name)).unwrap();
        println!("{name}: passed={} runtime={:.2?}", r.passed, r.runtime);
        for a in &r.assertions {
            println!("   {} {}", if a.passed { "ok  " } else { "FAIL" }, a.name);
        }
        for t in &r.tables {
            if t.rows.len() <= 12 {
                println!("   [{}] {:?}", t.name, t.columns);
                for row in &t.rows {
                    println!("      {}", serde_json::to_string(row).unwrap());
                }
            }
        }
    }
}
