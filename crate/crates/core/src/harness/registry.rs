//! Best-known costs and reference cutoffs of the benchmark instances.

use crate::fitness::Fitness;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnownInstance {
    pub name: &'static str,
    pub best_known: Fitness,
    /// Reference wall-clock cutoff in seconds.
    pub cutoff_s: u32,
}

const fn known(name: &'static str, best_known: Fitness, cutoff_s: u32) -> KnownInstance {
    KnownInstance {
        name,
        best_known,
        cutoff_s,
    }
}

/// TSPLIB symmetric Euclidean instances with 1,000 to 10,000 cities.
pub const TSP_INSTANCES: [KnownInstance; 23] = [
    known("Dsj1000", 18659688, 100),
    known("Pr1002", 259045, 120),
    known("U1060", 224094, 150),
    known("Vm1084", 239297, 155),
    known("Pcb1173", 56892, 160),
    known("D1291", 50801, 165),
    known("Nrw1379", 56638, 177),
    known("Fl1400", 20127, 180),
    known("U1432", 152970, 200),
    known("Fl1577", 22249, 250),
    known("D1655", 62128, 270),
    known("Vm1748", 336556, 280),
    known("U1817", 57201, 290),
    known("D2103", 80450, 309),
    known("U2152", 64253, 320),
    known("U2319", 234256, 350),
    known("Pr2392", 378032, 370),
    known("Pcb3038", 137694, 521),
    known("Fl3795", 28772, 1110),
    known("Fnl4461", 182566, 1150),
    known("Rl5915", 565530, 1200),
    known("Rl5934", 556045, 1320),
    known("Pla7397", 23260728, 2545),
];

/// QAPLIB instances with at least 80 facilities.
pub const QAP_INSTANCES: [KnownInstance; 24] = [
    known("Lipa80a", 253195, 20),
    known("Tai80a", 13499184, 21),
    known("Lipa80b", 7763962, 26),
    known("Tai80b", 818415043, 27),
    known("Sko81", 90998, 24),
    known("Lipa90a", 360630, 23),
    known("Lipa90b", 12490441, 36),
    known("Dre90", 1838, 35),
    known("Sko90", 115534, 28),
    known("Sko100a", 152002, 40),
    known("Tai100a", 21052466, 35),
    known("Sko100b", 153890, 52),
    known("Tai100b", 1185996137, 55),
    known("Sko100c", 147862, 42),
    known("Sko100d", 149576, 42),
    known("Sko100e", 149150, 42),
    known("Sko100f", 149036, 42),
    known("Wil100", 273038, 35),
    known("Dre110", 2264, 37),
    known("Esc128", 64, 21),
    known("Dre132", 2744, 65),
    known("Tai150b", 498896643, 105),
    known("Tho150", 8133398, 130),
    known("Tai256c", 44759294, 60),
];

/// Case-insensitive lookup by instance name (`pr1002`, `Pr1002` and
/// `PR1002` all match).
pub fn lookup(name: &str) -> Option<KnownInstance> {
    TSP_INSTANCES
        .iter()
        .chain(QAP_INSTANCES.iter())
        .find(|k| k.name.eq_ignore_ascii_case(name.trim()))
        .copied()
}

pub fn best_known(name: &str) -> Option<Fitness> {
    lookup(name).map(|k| k.best_known)
}
