//! Simulate one path of each discrete scheme from the same seed and write
//! them to CSV files in the current directory.

use std::fs::File;

use mslm::alpha::AlphaFunction;
use mslm::schemes::{Scheme, SchemeConfig};
use mslm::RandomStream;

fn main() -> mslm::Result<()> {
    let af = AlphaFunction::linear(1.2, 0.6)?;
    let cfg = SchemeConfig::new(10, af, RandomStream::new(7, 0))?;
    for scheme in Scheme::ALL {
        let path = scheme.simulate(&cfg);
        let name = format!("{}.csv", scheme.name());
        path.write_csv(File::create(&name)?)?;
        println!("{name}: {} points, L(1) = {:+.4}, largest jump {:.4}", path.len(), path.last(), path.max_jump());
    }
    Ok(())
}
