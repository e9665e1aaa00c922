//! Writing a generated configuration to JSON and reading it back.

use point_interactions::geometry::hyperbolic_level_packing;
use point_interactions::io::{config_to_json, parse_config_file, write_config_file};
use point_interactions::{PhysicalConstants, Result};

fn main() -> Result<()> {
    let config = hyperbolic_level_packing(1.0, 2.0, 1, 1.0, PhysicalConstants::NATURAL)?;
    let path = std::env::temp_dir().join("levels.json");
    write_config_file(&path, &config, Some(2.0), Some(5.0))?;
    let doc = parse_config_file(&path)?;
    println!("{}", config_to_json(&config, Some(2.0), Some(5.0))?);
    println!("round trip identical: {}", doc.configuration.as_ref() == Some(&config));
    println!("A = {:?}, B = {:?}", doc.const_a, doc.const_b);
    Ok(())
}
