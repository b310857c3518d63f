#![no_main]

use cvschur::format::parse_covariance_file;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Anything accepted must survive a write/read round trip unchanged.
    if let Ok(file) = parse_covariance_file(text) {
        let again = parse_covariance_file(&file.to_json()).expect("own output parses");
        assert_eq!(again, file);
    }
});
