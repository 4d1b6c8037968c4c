//! Min-max scaling, polynomial expansion and the LIBSVM text format.
//!
//! cargo run --example features

use nrrls::data::{parse_libsvm, write_libsvm};
use nrrls::features::{ExpansionMode, MinMaxScaler, PolyExpander};
use nrrls::linalg::Mat;

fn main() -> nrrls::Result<()> {
    let raw = Mat::from_rows(&[vec![2.0, 10.0], vec![6.0, 30.0], vec![4.0, 20.0]]);
    let scaler = MinMaxScaler::fit(&raw)?;
    let scaled = scaler.apply_mat(&raw)?;
    println!("scaled rows {:?}", scaled.row_iter().collect::<Vec<_>>());

    let full = PolyExpander::new(2, 2, ExpansionMode::FullMultinomial)?;
    println!("order 2, full: {:?}", full.expand(&[0.5, 2.0])?);
    let powers = PolyExpander::new(3, 2, ExpansionMode::PerFeaturePowers)?;
    println!("order 3, powers: {:?}", powers.expand(&[0.5, 2.0])?);
    let wide = PolyExpander::new(3, 72, ExpansionMode::Auto)?;
    println!("72 inputs at order 3 resolve to {:?} with {} outputs", wide.mode(), wide.output_dim());

    let ds = parse_libsvm("toy", "+1 1:0.5 3:1.2\n-1 2:-3\n", Some(4))?;
    print!("{}", write_libsvm(&ds));
    Ok(())
}
