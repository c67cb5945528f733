#![no_main]

use bfkit::HypothesisSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(h) = s.parse::<HypothesisSpec>() {
        let back: HypothesisSpec = h.to_string().parse().expect("display output must parse");
        assert_eq!(back, h);
    }
});
