//! CSV table of every convergent tuple of weight at most 4.

use g2zeta::cli::{cmd_tabulate, Common};

fn main() -> g2zeta::Result<()> {
    let common = Common { digits: 25, json: false, out: None };
    print!("{}", cmd_tabulate(4, false, 200, &common)?.body);
    Ok(())
}
