#![no_main]

use certilab::CertificateMap;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(certs) = CertificateMap::from_json(text) {
        let again = CertificateMap::from_json(&certs.to_json()).expect("serialized certificates parse");
        assert_eq!(again, certs);
    }
});
