//! Exact elementary number theory: primality and factoring over u64,
//! Kronecker symbols, modular square roots, and binary quadratic forms.

pub mod forms;
pub mod primes;
pub mod sqrt;
pub mod symbols;

pub use forms::{
    class_number, class_number_within, field_class_number, reduced_forms,
    represented_by_principal_form, Discriminant, PrincipalForm, ReducedForm,
};
pub use primes::{factor_squarefree, is_prime, primes_in_range, primes_up_to};
pub use sqrt::sqrt_mod;
pub use symbols::kronecker;
