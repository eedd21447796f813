use mnc_lab::operators::{Kernel, KernelSpec};
use mnc_lab::space::MeasureSpace;

fn main() {
    let space = MeasureSpace::uniform(1024, 1.0).unwrap();
    let k = Kernel::materialize(&KernelSpec::Gaussian { width: 0.25 }, &space).unwrap();
    // hash the bits
    let mut h: u64 = 0xcbf29ce484222325;
    let probe = k.apply(&vec![1.0; 1024]);
    for v in probe {
        for b in v.to_bits().to_le_bytes() {
            h = (h ^ b as u64).wrapping_mul(0x100000001b3);
        }
    }
    println!("apply-ones hash: {h:016x}");
}
