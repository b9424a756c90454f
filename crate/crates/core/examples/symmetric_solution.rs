//! The symmetric solution: recursion table, closed forms and the value.

use cube_entropy::symmetric::{lambda_coeff, symmetric_value, unit_value, x_closed_form_unit, SymmetricData, SymmetricSolution};
use cube_entropy::{Result, SubsetMask};

fn main() -> Result<()> {
    let (k, lambda) = (4, 0.6);
    let data = SymmetricData::new(lambda, vec![0.9, 0.6, 0.4, 0.3])?;
    let sol = SymmetricSolution::new(data.clone());
    println!("x^r_s table (r < s <= {k}):");
    for r in 0..k {
        let row: Vec<String> = (r + 1..=k).map(|s| format!("{:+.5}", sol.table().get(r, s))).collect();
        println!("  r = {r}: {}{}", "         ".repeat(r), row.join(" "));
    }
    println!("value = {:.6} = {:.6}", sol.value(), symmetric_value(&data)?);
    let tail: f64 = (1..=k).map(|s| lambda_coeff(k, s, lambda) * data.y(s)).sum();
    println!("binomial-tail form = {tail:.6}");
    for s in 1..=k {
        println!("V(e_{s}) = {:.6}", unit_value(k, s, lambda)?);
    }
    let unit = (3..=k).map(|t| x_closed_form_unit(k, lambda, 1, 2, t)).collect::<Result<Vec<_>>>()?;
    println!("unit data e_1, x^2_t for t = 3..{k}: {unit:.5?}");
    let full = SubsetMask::full(k);
    println!("path value along the identity order: {:.6}", sol.path_value(full, &[0, 1, 2, 3])?);
    println!("path value along 3,1,4,2: {:.6}", sol.path_value(full, &[2, 0, 3, 1])?);
    Ok(())
}
