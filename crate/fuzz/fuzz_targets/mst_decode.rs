#![no_main]

use certilab::schemes::MstCertificate;
use certilab::BitString;
use libfuzzer_sys::fuzz_target;

// The first byte picks the identifier width, the rest are certificate bits.
fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else { return };
    let id_bits = u32::from(head % 16) + 1;
    let bits = BitString::from_bools(rest.iter().flat_map(|b| (0..8).map(move |i| b >> (7 - i) & 1 == 1)));
    let _ = MstCertificate::decode(&bits, id_bits);
});
