#![no_main]

use bfkit::PriorSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(p) = s.parse::<PriorSpec>() {
        assert!(p.dispersion() > 0.0 && p.dispersion().is_finite());
        // Display output parses back to the same prior.
        let back: PriorSpec = p.to_string().parse().expect("display output must parse");
        assert_eq!(back, p);
        let d = p.pdf(0.0).expect("pdf at 0");
        assert!(d > 0.0);
    }
});
