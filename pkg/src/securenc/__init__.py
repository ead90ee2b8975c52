"""Network coding with homomorphic-hash pollution checks and a Vandermonde source transform."""
from .codec import (
    CodedPacket,
    Manifest,
    VandermondeKey,
    decode,
    default_symbol_bytes,
    encode_source,
    is_valid_packet,
    join_file,
    make_vandermonde,
    sample_vandermonde_key,
    source_packets,
    split_file,
    verify_packet,
)
from .ffmath import GroupParams, gen_group_params, mat_inv, mat_mul, mod_exp, mod_inv, row_space_rank
from .homohash import (
    HashPublic,
    HashSecret,
    add_vectors,
    combine_hashes,
    gen_hash_params,
    hash_params_from_exponents,
    hash_public,
    hash_secret,
    linear_combination,
)
from .kernelgen import EdgeContext, derive_coeffs, global_kernel, seed_from_metadata, splitmix_next
from .simnet import (
    AdversaryAction,
    brute_force_recovery,
    check_practical_security,
    run_multicast,
    security_survey,
)
from .topology import Network, build_network

__version__ = "0.1.0"
