//! Key generation, copy issuance under a cap, encryption, decryption through
//! a capped device, and owner-only export.

use qpke::protocol::{
    describe_register, encrypt, export_public_key, keygen, DecryptionOracle, KeyGenParams,
    KeyRegistry, Precision,
};
use qpke::rng::seeded;

fn main() -> qpke::Result<()> {
    let mut rng = seeded(2024);
    let params = KeyGenParams {
        precision: Precision::Range { low: 32, high: 62 },
        qubits: 16,
        permute: true,
    };
    let (key, owner_copy) = keygen(&params, &mut rng)?;
    println!("key {} with n = {}, N = {}", key.key_id(), key.n(), key.len());

    let export = export_public_key(&owner_copy, &key.credential())?;
    println!("owner export: {} bytes", export.len());

    let mut registry = KeyRegistry::new();
    let id = registry.enroll(key.clone(), 2)?;
    let bob = registry.issue_copy(&id)?;
    let eve = registry.issue_copy(&id)?;
    println!("third copy: {:?}", registry.issue_copy(&id).unwrap_err().to_string());

    // Eve holds a copy but cannot read its description.
    let (stranger, _) = keygen(&KeyGenParams::default(), &mut rng)?;
    println!("describe with foreign credential: {:?}", describe_register(eve.register(), &stranger.credential()));

    let message = [true, false, true, true, false, false, true, false];
    let cipher = encrypt(bob, &message, 2, &mut rng)?;
    let mut device = DecryptionOracle::new(key, 1);
    let decoded = device.decrypt(cipher, &mut rng)?;
    println!("decoded == message: {}", decoded == message);
    println!("device active after one use: {}", device.is_active());
    Ok(())
}
