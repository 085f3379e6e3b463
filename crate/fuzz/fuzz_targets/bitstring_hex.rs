#![no_main]

use certilab::BitString;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(bits) = BitString::parse_hex(text) {
        assert_eq!(BitString::parse_hex(&bits.to_hex_string()).unwrap(), bits);
    }
    let _ = BitString::from_binary_str(text);
});
