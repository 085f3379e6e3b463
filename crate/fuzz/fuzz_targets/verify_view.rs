#![no_main]

use certilab::graph::json::instance_from_json;
use certilab::schemes::{scheme_by_name, CATALOG, PSEUDO_SCHEMES};
use certilab::{decide, CertificateMap};
use libfuzzer_sys::fuzz_target;

// Input layout: one byte selecting the scheme, then the instance JSON and
// the certificate JSON separated by a NUL byte.
fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let names: Vec<&str> = CATALOG.iter().chain(PSEUDO_SCHEMES).copied().collect();
    let scheme = scheme_by_name(names[pick as usize % names.len()]).unwrap();
    let Some(split) = rest.iter().position(|&b| b == 0) else { return };
    let (Ok(inst_text), Ok(cert_text)) = (std::str::from_utf8(&rest[..split]), std::str::from_utf8(&rest[split + 1..]))
    else {
        return;
    };
    let (Ok(inst), Ok(certs)) = (instance_from_json(inst_text), CertificateMap::from_json(cert_text)) else {
        return;
    };
    if inst.node_count() > 64 {
        return;
    }
    let _ = decide(&inst, &certs, &scheme);
});
