//! The bundled synthetic price series and its regeneration.
//!
//! `data/synthetic_prices.csv` holds 4066 prices whose log returns are
//! draws from the reference heavy-tailed mixture, scaled to daily-return
//! magnitude. The ignored test rewrites the file; the checked test pins the
//! committed bytes to the generator so the fixture cannot drift.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tailmix_core::estimate::{build_model, ModelKind, TransformSettings};
use tailmix_core::Model;

const SEED: u64 = 1;
const RETURNS: usize = 4065;
const SCALE: f64 = 0.01;
const START_PRICE: f64 = 100.0;

fn fixture_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_prices.csv")
}

fn generate_prices() -> Vec<f64> {
    let model = build_model(
        ModelKind::GpdNGpd,
        &[0.3, 0.4, 1.0, 0.2, 0.4],
        &TransformSettings::default(),
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let returns = model.sample(&mut rng, RETURNS);
    let mut prices = Vec::with_capacity(RETURNS + 1);
    let mut price = START_PRICE;
    prices.push(price);
    for r in returns {
        price *= (SCALE * r).exp();
        prices.push(price);
    }
    prices
}

#[test]
fn bundled_prices_match_generator() {
    let text = std::fs::read_to_string(fixture_path()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("price"));
    let parsed: Vec<f64> = lines.map(|l| l.parse().unwrap()).collect();
    let expected = generate_prices();
    assert_eq!(parsed.len(), expected.len());
    for (a, b) in parsed.iter().zip(&expected) {
        assert_eq!(a, b);
    }
}

#[test]
#[ignore = "rewrites the bundled fixture"]
fn write_bundled_prices() {
    let mut out = String::from("price\n");
    for p in generate_prices() {
        let mut buf = ryu_format(p);
        buf.push('\n');
        out.push_str(&buf);
    }
    std::fs::write(fixture_path(), out).unwrap();
}

// Shortest round-trip decimal form, as the CSV writer produces.
fn ryu_format(v: f64) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(v).unwrap();
    let bytes = w.into_inner().unwrap();
    String::from_utf8(bytes).unwrap().trim_end().to_string()
}
