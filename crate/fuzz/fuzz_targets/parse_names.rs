#![no_main]

use cvschur::locc::EstimatorRule;
use cvschur::verify::Suite;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rule) = text.parse::<EstimatorRule>() {
        assert_eq!(rule.to_string(), text);
    }
    if let Ok(suite) = text.parse::<Suite>() {
        assert_eq!(suite.to_string(), text);
    }
});
