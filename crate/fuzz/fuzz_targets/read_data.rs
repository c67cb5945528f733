#![no_main]

use bfkit::data::{read_one_sample, read_two_sample};
use bfkit::ObservedSample;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(y) = read_one_sample(data) {
        assert!(y.len() >= 2 && y.iter().all(|v| v.is_finite()));
        let _ = ObservedSample::one_sample(y);
    }
    if let Ok((x, y)) = read_two_sample(data) {
        assert!(x.len() >= 2 && y.len() >= 2);
        let _ = ObservedSample::two_sample(x, y);
    }
});
