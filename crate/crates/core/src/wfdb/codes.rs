/// Numeric annotation code as stored in the high 6 bits of an annotation word.
pub type AnnotationCode = u8;

/// Display symbols for MIT annotation codes 0..=41, indexed by code.
/// `None` marks codes without a standard mnemonic.
const SYMBOLS: [Option<char>; 42] = [
    None,      // 0 NOTQRS
    Some('N'), // 1 NORMAL
    Some('L'), // 2 LBBB
    Some('R'), // 3 RBBB
    Some('a'), // 4 ABERR
    Some('V'), // 5 PVC
    Some('F'), // 6 FUSION
    Some('J'), // 7 NPC
    Some('A'), // 8 APC
    Some('S'), // 9 SVPB
    Some('E'), // 10 VESC
    Some('j'), // 11 NESC
    Some('/'), // 12 PACE
    Some('Q'), // 13 UNKNOWN
    Some('~'), // 14 NOISE
    None,      // 15
    Some('|'), // 16 ARFCT
    None,      // 17
    Some('s'), // 18 STCH
    Some('T'), // 19 TCH
    Some('*'), // 20 SYSTOLE
    Some('D'), // 21 DIASTOLE
    Some('"'), // 22 NOTE
    Some('='), // 23 MEASURE
    Some('p'), // 24 PWAVE
    Some('B'), // 25 BBB
    Some('^'), // 26 PACESP
    Some('t'), // 27 TWAVE
    Some('+'), // 28 RHYTHM
    Some('u'), // 29 UWAVE
    Some('?'), // 30 LEARN
    Some('!'), // 31 FLWAV
    Some('['), // 32 VFON
    Some(']'), // 33 VFOFF
    Some('e'), // 34 AESC
    Some('n'), // 35 SVESC
    Some('@'), // 36 LINK
    Some('x'), // 37 NAPC
    Some('f'), // 38 PFUS
    Some('('), // 39 WFON
    Some(')'), // 40 WFOFF
    Some('r'), // 41 RONT
];

/// Highest code that may label an annotation; 50..=63 are reserved or
/// used as modifier words.
pub const MAX_ANNOTATION_CODE: AnnotationCode = 49;

/// Mnemonic for `code`, or `None` when the code has no standard symbol.
pub fn symbol_for_code(code: AnnotationCode) -> Option<char> {
    SYMBOLS.get(code as usize).copied().flatten()
}

/// Inverse of [`symbol_for_code`].
pub fn code_for_symbol(symbol: char) -> Option<AnnotationCode> {
    SYMBOLS
        .iter()
        .position(|s| *s == Some(symbol))
        .map(|i| i as AnnotationCode)
}

/// True for codes that mark a QRS complex (the WFDB `isqrs` set).
pub fn is_beat_code(code: AnnotationCode) -> bool {
    matches!(code, 1..=13 | 25 | 34 | 35 | 38 | 41)
}
