//! which blocks may be perturbed, with what structure and over which field

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    J,
    R,
    E,
    B,
}

/// subsets of {J, R, E, B} that have closed forms
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockSet {
    JE,
    RE,
    JR,
    JB,
    RB,
    EB,
    JRB,
    REB,
    JEB,
    JRE,
    JREB,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureClass {
    /// each perturbed block is an arbitrary matrix
    BlockOnly,
    /// ΔJ skew-Hermitian, ΔR and ΔE Hermitian
    SymmetryPreserving,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Complex,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerturbationScope {
    pub blocks: BlockSet,
    pub structure: StructureClass,
    pub field: Field,
}

impl BlockSet {
    pub const ALL: [BlockSet; 11] = [
        BlockSet::JE,
        BlockSet::RE,
        BlockSet::JR,
        BlockSet::JB,
        BlockSet::RB,
        BlockSet::EB,
        BlockSet::JRB,
        BlockSet::REB,
        BlockSet::JEB,
        BlockSet::JRE,
        BlockSet::JREB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BlockSet::JE => "JE",
            BlockSet::RE => "RE",
            BlockSet::JR => "JR",
            BlockSet::JB => "JB",
            BlockSet::RB => "RB",
            BlockSet::EB => "EB",
            BlockSet::JRB => "JRB",
            BlockSet::REB => "REB",
            BlockSet::JEB => "JEB",
            BlockSet::JRE => "JRE",
            BlockSet::JREB => "JREB",
        }
    }

    pub fn contains(self, b: Block) -> bool {
        self.name().contains(match b {
            Block::J => 'J',
            Block::R => 'R',
            Block::E => 'E',
            Block::B => 'B',
        })
    }

    pub fn has_b(self) -> bool {
        self.contains(Block::B)
    }
}

impl fmt::Display for BlockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseScopeError(pub String);

impl fmt::Display for ParseScopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown block set '{}'", self.0)
    }
}

impl std::error::Error for ParseScopeError {}

impl FromStr for BlockSet {
    type Err = ParseScopeError;

    /// accepts any ordering of the letters, case-insensitive
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters: Vec<char> = s.trim().to_ascii_uppercase().chars().collect();
        letters.sort_by_key(|ch| match ch {
            'J' => 0,
            'R' => 1,
            'E' => 2,
            'B' => 3,
            _ => 9,
        });
        let key: String = letters.into_iter().collect();
        BlockSet::ALL
            .iter()
            .copied()
            .find(|b| b.name() == key)
            .ok_or_else(|| ParseScopeError(s.to_string()))
    }
}

impl PerturbationScope {
    pub fn new(blocks: BlockSet, structure: StructureClass, field: Field) -> Self {
        PerturbationScope { blocks, structure, field }
    }

    pub fn block(blocks: BlockSet) -> Self {
        Self::new(blocks, StructureClass::BlockOnly, Field::Complex)
    }

    pub fn sym(blocks: BlockSet) -> Self {
        Self::new(blocks, StructureClass::SymmetryPreserving, Field::Complex)
    }

    pub fn real_block(blocks: BlockSet) -> Self {
        Self::new(blocks, StructureClass::BlockOnly, Field::Real)
    }

    pub fn real_sym(blocks: BlockSet) -> Self {
        Self::new(blocks, StructureClass::SymmetryPreserving, Field::Real)
    }

    /// combinations with a closed form or two-sided bounds
    pub fn is_supported(&self) -> bool {
        use BlockSet::*;
        match (self.field, self.structure) {
            (Field::Complex, StructureClass::BlockOnly) => true,
            (Field::Complex, StructureClass::SymmetryPreserving) => {
                matches!(self.blocks, JE | RE | JR | JRB | REB | JRE | JREB)
            }
            (Field::Real, StructureClass::BlockOnly) => matches!(self.blocks, JR | JB | RB | EB | JRB),
            (Field::Real, StructureClass::SymmetryPreserving) => matches!(self.blocks, JR | JRB),
        }
    }

    /// symmetric scopes where only lower and upper bounds are known
    pub fn has_bounds(&self) -> bool {
        use BlockSet::*;
        self.field == Field::Complex
            && self.structure == StructureClass::SymmetryPreserving
            && matches!(self.blocks, RE | REB | JRE | JREB)
    }

    /// every supported scope
    pub fn all_supported() -> Vec<PerturbationScope> {
        let mut out = Vec::new();
        for field in [Field::Complex, Field::Real] {
            for structure in [StructureClass::BlockOnly, StructureClass::SymmetryPreserving] {
                for b in BlockSet::ALL {
                    let s = PerturbationScope::new(b, structure, field);
                    if s.is_supported() {
                        out.push(s);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for PerturbationScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let st = match self.structure {
            StructureClass::BlockOnly => "block",
            StructureClass::SymmetryPreserving => "sym",
        };
        match self.field {
            Field::Complex => write!(f, "{}/{}", self.blocks, st),
            Field::Real => write!(f, "{}/{}/real", self.blocks, st),
        }
    }
}
