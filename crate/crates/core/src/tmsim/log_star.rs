/// Iterated logarithm: the least `l` with `n <= 2^2^..^2` (a tower of `l`
/// twos, the empty tower being 1). Equivalently, how many times `log2` must
/// be applied before the value drops to at most 1.
pub fn log_star(n: u64) -> u32 {
    // towers of height 0..=4; the next one, 2^65536, exceeds every u64
    const TOWERS: [u64; 5] = [1, 2, 4, 16, 65536];
    TOWERS.iter().position(|&t| n <= t).map_or(5, |l| l as u32)
}
