use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Repetition factor of the code.
pub const N: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocationKind {
    Wire,
    Voter,
    Fanout,
}

impl LocationKind {
    pub const ALL: [LocationKind; 3] = [
        LocationKind::Wire,
        LocationKind::Voter,
        LocationKind::Fanout,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            LocationKind::Wire => "w",
            LocationKind::Voter => "v",
            LocationKind::Fanout => "f",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        LocationKind::ALL.into_iter().find(|k| k.symbol() == s)
    }

    pub fn arity(self) -> (usize, usize) {
        match self {
            LocationKind::Wire => (1, 1),
            LocationKind::Voter => (N, 1),
            LocationKind::Fanout => (1, N),
        }
    }

    /// Fanouts are modelled as noiseless.
    pub fn is_fallible(self) -> bool {
        self != LocationKind::Fanout
    }

    /// Logical function on bits.
    pub fn apply(self, inputs: &[bool]) -> Vec<bool> {
        match self {
            LocationKind::Wire => vec![inputs[0]],
            LocationKind::Voter => vec![majority(inputs)],
            LocationKind::Fanout => vec![inputs[0]; N],
        }
    }
}

pub(crate) fn majority(bits: &[bool]) -> bool {
    2 * bits.iter().filter(|&&b| b).count() > bits.len()
}

/// A location instance; ports are indices of bit signals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalLocation {
    pub kind: LocationKind,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

/// Acyclic network of locations acting on encoded bit bundles.
///
/// The circuit implements `function` on logical values: input bundle `i`
/// carries the encoding of the `i`-th logical input, output bundle `j` should
/// decode to the `j`-th logical output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalCircuit {
    name: String,
    function: LocationKind,
    num_bits: usize,
    inputs: Vec<Vec<usize>>,
    outputs: Vec<Vec<usize>>,
    locations: Vec<ClassicalLocation>,
}

impl ClassicalCircuit {
    /// Validates arity, single driving of every signal, and topological
    /// order of `locations`.
    pub fn new(
        name: &str,
        function: LocationKind,
        num_bits: usize,
        inputs: Vec<Vec<usize>>,
        outputs: Vec<Vec<usize>>,
        locations: Vec<ClassicalLocation>,
    ) -> Result<Self> {
        let (n_in, n_out) = function.arity();
        if inputs.len() != n_in || outputs.len() != n_out {
            return Err(Error::InvalidCircuit(alloc::format!(
                "`{name}` must have {n_in} input and {n_out} output bundles"
            )));
        }
        let width = inputs[0].len();
        if width == 0 || inputs.iter().chain(&outputs).any(|b| b.len() != width) {
            return Err(Error::InvalidCircuit(
                "bundles must share a nonzero width".into(),
            ));
        }
        let mut driven = vec![false; num_bits];
        let mut drive = |bit: usize| -> Result<()> {
            let slot = driven
                .get_mut(bit)
                .ok_or_else(|| Error::InvalidCircuit(alloc::format!("bit {bit} out of range")))?;
            if *slot {
                return Err(Error::InvalidCircuit(alloc::format!(
                    "bit {bit} driven twice"
                )));
            }
            *slot = true;
            Ok(())
        };
        for b in inputs.iter().flatten() {
            drive(*b)?;
        }
        let mut ready: Vec<bool> = vec![false; num_bits];
        for b in inputs.iter().flatten() {
            ready[*b] = true;
        }
        for (id, loc) in locations.iter().enumerate() {
            let (i, o) = loc.kind.arity();
            if loc.inputs.len() != i || loc.outputs.len() != o {
                return Err(Error::InvalidCircuit(alloc::format!(
                    "location {id} has wrong arity"
                )));
            }
            for b in &loc.inputs {
                if !ready.get(*b).copied().unwrap_or(false) {
                    return Err(Error::InvalidCircuit(alloc::format!(
                        "location {id} reads bit {b} before it is driven"
                    )));
                }
            }
            for b in &loc.outputs {
                drive(*b)?;
                ready[*b] = true;
            }
        }
        for b in outputs.iter().flatten() {
            if !ready.get(*b).copied().unwrap_or(false) {
                return Err(Error::InvalidCircuit(alloc::format!(
                    "output bit {b} is never driven"
                )));
            }
        }
        let circuit = ClassicalCircuit {
            name: name.into(),
            function,
            num_bits,
            inputs,
            outputs,
            locations,
        };
        circuit.check_function()?;
        Ok(circuit)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn function(&self) -> LocationKind {
        self.function
    }

    pub fn locations(&self) -> &[ClassicalLocation] {
        &self.locations
    }

    pub fn block_width(&self) -> usize {
        self.inputs[0].len()
    }

    /// Fallible location ids in circuit order.
    pub fn fallible(&self) -> Vec<usize> {
        (0..self.locations.len())
            .filter(|&i| self.locations[i].kind.is_fallible())
            .collect()
    }

    /// Number of locations of each kind.
    pub fn census(&self, kind: LocationKind) -> usize {
        self.locations.iter().filter(|l| l.kind == kind).count()
    }

    /// Runs the network on logical inputs encoded by repetition. Locations
    /// whose id is in `failed` flip every output bit. Returns the decoded
    /// logical outputs.
    pub fn run(&self, logical_inputs: &[bool], failed: &[bool]) -> Vec<bool> {
        let mut bits = vec![false; self.num_bits];
        for (bundle, &value) in self.inputs.iter().zip(logical_inputs) {
            for &b in bundle {
                bits[b] = value;
            }
        }
        let mut scratch = Vec::with_capacity(N);
        for (id, loc) in self.locations.iter().enumerate() {
            scratch.clear();
            scratch.extend(loc.inputs.iter().map(|&b| bits[b]));
            let out = loc.kind.apply(&scratch);
            let flip = failed.get(id).copied().unwrap_or(false);
            for (&b, v) in loc.outputs.iter().zip(out) {
                bits[b] = v ^ flip;
            }
        }
        self.outputs
            .iter()
            .map(|bundle| {
                let decoded: Vec<bool> = bundle.iter().map(|&b| bits[b]).collect();
                majority(&decoded)
            })
            .collect()
    }

    /// Fault-free behaviour must equal the replaced location's function on
    /// every combination of logical inputs.
    fn check_function(&self) -> Result<()> {
        let n_in = self.inputs.len();
        let none = vec![false; self.locations.len()];
        for mask in 0..(1u32 << n_in) {
            let input: Vec<bool> = (0..n_in).map(|i| mask >> i & 1 == 1).collect();
            if self.run(&input, &none) != self.function.apply(&input) {
                return Err(Error::InvalidCircuit(alloc::format!(
                    "`{}` does not implement {} on input {input:?}",
                    self.name,
                    self.function.symbol()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ClassicalCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {} implements {}", self.name, self.function.symbol())?;
        let bundles = |b: &[Vec<usize>]| b.iter().map(|x| ports(x)).collect::<Vec<_>>().join(" | ");
        writeln!(f, "# inputs {}", bundles(&self.inputs))?;
        writeln!(f, "# outputs {}", bundles(&self.outputs))?;
        for (id, loc) in self.locations.iter().enumerate() {
            writeln!(
                f,
                "{id} {} {} → {}",
                loc.kind.symbol(),
                ports(&loc.inputs),
                ports(&loc.outputs)
            )?;
        }
        Ok(())
    }
}

fn ports(bits: &[usize]) -> String {
    bits.iter()
        .map(|b| alloc::format!("b{b}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Incremental builder handing out fresh bit ids.
struct Builder {
    next: usize,
    locations: Vec<ClassicalLocation>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            next: 0,
            locations: Vec::new(),
        }
    }

    fn bits(&mut self, n: usize) -> Vec<usize> {
        let out = (self.next..self.next + n).collect();
        self.next += n;
        out
    }

    fn place(&mut self, kind: LocationKind, inputs: Vec<usize>) -> Vec<usize> {
        let outputs = self.bits(kind.arity().1);
        self.locations.push(ClassicalLocation {
            kind,
            inputs,
            outputs: outputs.clone(),
        });
        outputs
    }

    /// Error correction of one bundle: fan each bit out, then voter `j`
    /// takes copy `j` of every bit.
    fn ec(&mut self, block: &[usize]) -> Vec<usize> {
        let copies: Vec<Vec<usize>> = block
            .iter()
            .map(|&b| self.place(LocationKind::Fanout, vec![b]))
            .collect();
        (0..N)
            .map(|j| {
                let ins = copies.iter().map(|c| c[j]).collect();
                self.place(LocationKind::Voter, ins)[0]
            })
            .collect()
    }

    fn finish(
        self,
        name: &str,
        function: LocationKind,
        inputs: Vec<Vec<usize>>,
        outputs: Vec<Vec<usize>>,
    ) -> Result<ClassicalCircuit> {
        ClassicalCircuit::new(name, function, self.next, inputs, outputs, self.locations)
    }
}

/// The level-1 replacement rule for `kind`.
///
/// * wire: error correction, then three transversal wires;
/// * voter: error correction on each of the three input bundles, then three
///   transversal voters;
/// * fanout: three transversal fanouts.
pub fn build_replacement(kind: LocationKind) -> ClassicalCircuit {
    let mut b = Builder::new();
    let circuit = match kind {
        LocationKind::Wire => {
            let input = b.bits(N);
            let corrected = b.ec(&input);
            let out: Vec<usize> = corrected
                .iter()
                .map(|&x| b.place(LocationKind::Wire, vec![x])[0])
                .collect();
            b.finish("R(w)", kind, vec![input], vec![out])
        }
        LocationKind::Voter => {
            let inputs: Vec<Vec<usize>> = (0..N).map(|_| b.bits(N)).collect();
            let corrected: Vec<Vec<usize>> = inputs.iter().map(|blk| b.ec(blk)).collect();
            let out: Vec<usize> = (0..N)
                .map(|j| {
                    let ins = corrected.iter().map(|c| c[j]).collect();
                    b.place(LocationKind::Voter, ins)[0]
                })
                .collect();
            b.finish("R(v)", kind, inputs, vec![out])
        }
        LocationKind::Fanout => {
            let input = b.bits(N);
            let copies: Vec<Vec<usize>> = input
                .iter()
                .map(|&x| b.place(LocationKind::Fanout, vec![x]))
                .collect();
            let outs = (0..N)
                .map(|k| copies.iter().map(|c| c[k]).collect())
                .collect();
            b.finish("R(f)", kind, vec![input], outs)
        }
    };
    circuit.expect("replacement rules are well formed")
}

/// A bare, unencoded location acting on single bits.
pub fn single_location(kind: LocationKind) -> ClassicalCircuit {
    let mut b = Builder::new();
    let (n_in, _) = kind.arity();
    let inputs: Vec<Vec<usize>> = (0..n_in).map(|_| b.bits(1)).collect();
    let flat: Vec<usize> = inputs.iter().flatten().copied().collect();
    let outs = b.place(kind, flat).into_iter().map(|x| vec![x]).collect();
    b.finish(kind.symbol(), kind, inputs, outs)
        .expect("single locations are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn wire_replacement_census() {
        let c = build_replacement(LocationKind::Wire);
        assert_eq!(c.census(LocationKind::Voter), 3);
        assert_eq!(c.census(LocationKind::Wire), 3);
        assert_eq!(c.fallible().len(), 6);
    }

    #[test]
    fn voter_replacement_census() {
        let c = build_replacement(LocationKind::Voter);
        assert_eq!(c.census(LocationKind::Voter), 12);
        assert_eq!(c.census(LocationKind::Fanout), 9);
        assert_eq!(c.census(LocationKind::Wire), 0);
    }

    #[test]
    fn fanout_replacement_is_noiseless() {
        let c = build_replacement(LocationKind::Fanout);
        assert!(c.fallible().is_empty());
        assert_eq!(c.run(&[true], &[]), vec![true; 3]);
    }

    #[test]
    fn fault_free_wire_preserves_encoded_one() {
        let c = build_replacement(LocationKind::Wire);
        assert_eq!(c.run(&[true], &[]), vec![true]);
        assert_eq!(c.run(&[false], &[]), vec![false]);
    }

    #[test]
    fn cycles_and_double_drives_are_rejected() {
        let loc = |i: usize, o: usize| ClassicalLocation {
            kind: LocationKind::Wire,
            inputs: vec![i],
            outputs: vec![o],
        };
        let bad_order = ClassicalCircuit::new(
            "x",
            LocationKind::Wire,
            3,
            vec![vec![0]],
            vec![vec![2]],
            vec![loc(1, 2), loc(0, 1)],
        );
        assert!(matches!(bad_order, Err(Error::InvalidCircuit(_))));
        let double = ClassicalCircuit::new(
            "x",
            LocationKind::Wire,
            2,
            vec![vec![0]],
            vec![vec![1]],
            vec![loc(0, 1), loc(0, 1)],
        );
        assert!(matches!(double, Err(Error::InvalidCircuit(_))));
    }

    #[test]
    fn netlist_lists_one_location_per_line() {
        let text = build_replacement(LocationKind::Wire).to_string();
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body.len(), 9);
        assert_eq!(body[0], "0 f b0 → b3,b4,b5");
        assert!(body[3].starts_with("3 v b3,b6,b9 → "));
    }
}
