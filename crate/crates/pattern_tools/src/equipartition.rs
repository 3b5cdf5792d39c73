use crate::PatternError;

/// Splits `vertices` into `parts` consecutive blocks whose sizes are
/// multiples of `block` and take at most two values, differing by exactly
/// `block`. Larger parts come first.
pub fn f_equipartition(vertices: &[usize], parts: usize, block: usize) -> Result<Vec<Vec<usize>>, PatternError> {
    if block == 0 || parts == 0 {
        return Err(PatternError::Parameter("block size and part count must be positive".into()));
    }
    if vertices.len() % block != 0 {
        return Err(PatternError::Parameter(format!(
            "{} vertices cannot be split into blocks of size {block}",
            vertices.len()
        )));
    }
    let units = vertices.len() / block;
    if units < parts {
        return Err(PatternError::Parameter(format!(
            "{} vertices give only {units} blocks of size {block}, fewer than {parts} parts",
            vertices.len()
        )));
    }
    let (base, larger) = (units / parts, units % parts);
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for i in 0..parts {
        let size = (base + usize::from(i < larger)) * block;
        out.push(vertices[start..start + size].to_vec());
        start += size;
    }
    Ok(out)
}
