use hmac::{Hmac, KeyInit, Mac};
use sha2::Sha256;

use super::{EpcRecord, RecordSet};

const PREFIX: &str = "anon-";
const DIGEST_HEX_LEN: usize = 32;

/// True for identifiers produced by [`anonymize`].
pub fn is_anonymized_id(id: &str) -> bool {
    id.strip_prefix(PREFIX).is_some_and(|hex| {
        hex.len() == DIGEST_HEX_LEN && hex.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
    })
}

fn hashed_id(key: &[u8], id: &str) -> String {
    let mut mac = <Hmac<Sha256> as KeyInit>::new_from_slice(key).expect("HMAC accepts keys of any length");
    mac.update(id.as_bytes());
    let digest = mac.finalize().into_bytes();
    format!("{PREFIX}{}", hex::encode(&digest[..DIGEST_HEX_LEN / 2]))
}

fn round_tenth(deg: f64) -> f64 {
    (deg * 10.0).round() / 10.0
}

/// Replace record ids with a keyed HMAC-SHA256 digest and coarsen coordinates
/// to 0.1°. Ids that are already anonymized are left alone, which makes the
/// operation idempotent.
pub fn anonymize(set: &RecordSet, key: &[u8]) -> RecordSet {
    let records = set
        .records()
        .iter()
        .map(|r| EpcRecord {
            record_id: if is_anonymized_id(&r.record_id) { r.record_id.clone() } else { hashed_id(key, &r.record_id) },
            latitude: round_tenth(r.latitude),
            longitude: round_tenth(r.longitude),
            ..r.clone()
        })
        .collect();
    RecordSet::new(records, set.provenance())
        .expect("coarsened coordinates stay within the validated range")
        .with_anonymized(true)
}
