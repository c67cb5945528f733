#![no_main]

use bfkit::simulation::SimulationReport;
use bfkit::BayesFactorResult;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<BayesFactorResult>(data) {
        let json = serde_json::to_string(&r).expect("serialize");
        let back: BayesFactorResult = serde_json::from_str(&json).expect("re-parse");
        // NaN fields compare unequal, so compare the serialized form.
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
        let _ = r.log_bf01();
    }
    if let Ok(r) = serde_json::from_slice::<SimulationReport>(data) {
        let _ = serde_json::to_string(&r).expect("serialize");
        let _ = r.write_csv(std::io::sink());
    }
});
