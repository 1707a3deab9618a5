/// For wires with dims `dims` reordered so that new position q holds old wire
/// `perm[q]`, returns `map` with `map[new_index] = old_index`.
pub(crate) fn digits_permutation(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let mut old_stride = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        old_stride[k] = old_stride[k + 1] * dims[k + 1];
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let side: usize = dims.iter().product();
    let mut map = Vec::with_capacity(side);
    let mut digits = vec![0usize; n];
    for _ in 0..side {
        map.push(digits.iter().zip(perm).map(|(d, &p)| d * old_stride[p]).sum());
        // odometer increment, last digit fastest
        for q in (0..n).rev() {
            digits[q] += 1;
            if digits[q] < new_dims[q] {
                break;
            }
            digits[q] = 0;
        }
    }
    map
}
