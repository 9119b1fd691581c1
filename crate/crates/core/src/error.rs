use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("operands belong to different polynomial rings")]
    MixedContext,
    #[error("polynomial is not divisible by the divisor")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("invalid variable set: {0}")]
    InvalidVarSet(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("modulus must be a nonconstant polynomial")]
    ConstantPolynomial,
    #[error("modulus must involve the first variable only")]
    NotUnivariate,
    #[error("modulus is not squarefree")]
    NotSquarefree,
    #[error("modulus is reducible over the coefficient field")]
    Reducible,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("residue is not invertible: the modulus is reducible")]
    NotInvertible,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("Groebner basis budget exceeded ({0})")]
    BudgetExceeded(String),
    #[error("the generators do not generate the unit ideal")]
    NotUnitIdeal,
    #[error("empty generator list")]
    NoGenerators,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("minor order {order} out of range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },
    #[error("zero matrix")]
    ZeroMatrix,
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<ResidueError> for MatrixError {
    fn from(e: ResidueError) -> Self {
        match e {
            ResidueError::Poly(p) => MatrixError::Poly(p),
            other => MatrixError::ShapeMismatch(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("certificate does not verify for the given matrix")]
    InvalidCertificate,
    #[error("fixed rows are linearly dependent")]
    DependentRows,
    #[error("matrix over the residue ring does not have rank one")]
    NotRankOne,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

impl From<IdealError> for ReduceError {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::BudgetExceeded(s) => ReduceError::BudgetExceeded(s),
            other => ReduceError::Matrix(MatrixError::Ideal(other)),
        }
    }
}

impl From<PolyError> for ReduceError {
    fn from(e: PolyError) -> Self {
        ReduceError::Matrix(MatrixError::Poly(e))
    }
}

impl ReduceError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            ReduceError::BudgetExceeded(_)
                | ReduceError::Matrix(MatrixError::Ideal(IdealError::BudgetExceeded(_)))
        )
    }
}

impl MatrixError {
    pub fn is_budget(&self) -> bool {
        matches!(self, MatrixError::Ideal(IdealError::BudgetExceeded(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("exponents must be nondecreasing")]
    UnsortedExponents,
    #[error("{count} exponents do not fit a {rows}x{cols} matrix")]
    TooManyExponents { count: usize, rows: usize, cols: usize },
    #[error("matrix shape must be nonempty")]
    EmptyShape,
}
