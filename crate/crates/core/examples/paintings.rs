// Genus-one paintings of a loop skeleton and the comparison of
// classification records.

use std::error::Error;

use tallone::painting::{compare_records, ClassificationRecord};

fn load(name: &str) -> Result<ClassificationRecord, Box<dyn Error>> {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

pub fn run() -> Result<(), Box<dyn Error>> {
    let a = load("6d_record_a.json")?;
    let b = load("6d_record_b.json")?;
    println!("a vs a: {:?}", compare_records(&a, &a).verdict);
    let c = compare_records(&a, &b);
    println!("a vs b: {:?} (paintings equivalent: {:?})", c.verdict, c.paintings_equivalent);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
