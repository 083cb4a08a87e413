//! The 7-qubit code viewed through its classical [7,4,3] Hamming code.
//!
//! Qubit `i` sits at Hamming position `i + 1`, so the syndrome of a single
//! flipped bit is the binary representation of its position. The same three
//! parity checks define both the X-type and the Z-type stabilizers.

/// Parity-check rows as 7-bit masks over qubits `0..7`.
pub const CHECKS: [u8; 3] = [0b101_0101, 0b110_0110, 0b111_1000];

/// Qubits that start in `|+⟩` when encoding `|0⟩_L` (positions 1, 2, 4).
pub const PIVOTS: [usize; 3] = [0, 1, 3];

/// Encoder CNOT layers: `(pivot, target)` pairs, three per time step, no
/// qubit used twice in a step. Pivot `p` spreads to the support of check
/// row `log2(p + 1)`.
pub const ENCODER_LAYERS: [[(usize, usize); 3]; 3] = [
    [(0, 2), (1, 5), (3, 6)],
    [(0, 4), (1, 6), (3, 5)],
    [(0, 6), (1, 2), (3, 4)],
];

/// Support of the weight-3 logical operator measured to verify an encoded
/// ancilla (positions 3, 4, 7).
pub const VERIFY_SUPPORT: [usize; 3] = [2, 3, 6];

/// Syndrome of a 7-bit word: the 1-based position of a single flip, 0 if
/// the word is a codeword.
pub fn syndrome(word: u8) -> u8 {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, &row)| (((word & row).count_ones() & 1) as u8) << i)
        .sum()
}

/// Corrects at most one flip and reports whether the result has odd
/// parity, i.e. carries a logical error.
pub fn decode_is_logical(word: u8) -> bool {
    let s = syndrome(word);
    let corrected = if s == 0 { word } else { word ^ (1 << (s - 1)) };
    corrected.count_ones() & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_flips_are_located() {
        for q in 0..7 {
            assert_eq!(syndrome(1 << q), q as u8 + 1);
            assert!(!decode_is_logical(1 << q));
        }
        assert_eq!(syndrome(0), 0);
    }

    #[test]
    fn checks_are_stabilizers_and_full_word_is_logical() {
        for row in CHECKS {
            assert_eq!(syndrome(row), 0);
            assert!(!decode_is_logical(row));
        }
        assert!(decode_is_logical(0x7f));
        let s: u8 = VERIFY_SUPPORT.iter().map(|q| 1u8 << q).sum();
        assert_eq!(syndrome(s), 0);
        assert!(decode_is_logical(s));
    }

    #[test]
    fn encoder_reaches_every_check_row() {
        for (k, &p) in PIVOTS.iter().enumerate() {
            let mut support = 1u8 << p;
            for layer in ENCODER_LAYERS {
                for (c, t) in layer {
                    if c == p {
                        support |= 1 << t;
                    }
                }
            }
            assert_eq!(support, CHECKS[k]);
        }
    }

    #[test]
    fn weight_two_errors_are_miscorrected() {
        assert!(decode_is_logical(0b11));
    }
}
