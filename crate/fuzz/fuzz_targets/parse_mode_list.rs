#![no_main]

use cvschur::format::parse_mode_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(modes) = parse_mode_list(text) {
        assert!(!modes.is_empty());
        let printed: Vec<String> = modes.iter().map(|m| (m + 1).to_string()).collect();
        assert_eq!(parse_mode_list(&printed.join(",")).unwrap(), modes);
    }
});
