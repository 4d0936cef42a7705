//! Glue unit-interval pieces into a path on [0, 3] and build the classical
//! stable partial-sum path.

use mslm::alpha::AlphaFunction;
use mslm::schemes::{glue_whole_line, simulate_stable_fclt};
use mslm::RandomStream;

fn main() -> mslm::Result<()> {
    let af = AlphaFunction::linear(1.0, 0.3)?.with_domain(0.0, 3.0)?;
    let glued = glue_whole_line(&af, 8, RandomStream::new(17, 0))?;
    println!("glued path on [0, 3]: {} points, L(1)={:+.4} L(2)={:+.4} L(3)={:+.4}", glued.len(), glued.value_at(1.0), glued.value_at(2.0), glued.last());
    let fclt = simulate_stable_fclt(1.5, 4096, RandomStream::new(17, 1))?;
    println!("partial sums: {} points, S(1)={:+.4}", fclt.len(), fclt.last());
    Ok(())
}
