//! Run a few cheap acceptance checks and print their JSON records.

use mslm::suite::select;

fn main() -> mslm::Result<()> {
    for c in select("c_alpha,triangle_identity,scale_parameter,example1")? {
        let rec = (c.run)(7)?;
        println!("{:?} {}\n{}\n", rec.verdict, c.name, serde_json::to_string_pretty(&rec.measured)?);
    }
    Ok(())
}
