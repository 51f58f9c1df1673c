"""Attribute-based encryption with payable outsourced decryption.

A ciphertext-policy ABE scheme in the key-encapsulation setting, plus
the machinery around it: transform/retrieve key splitting for untrusted
decryption servers, a content-addressed store for task data, dispute
proofs binding a claimed partial decryption to its inputs, and a
simulated token ledger running the optimistic challenge game.
"""

from .abe_core import (AuthenticationError, Ciphertext, HybridPackage, MasterKey,
                       PublicKey, RetrieveKey, SecretKey, TransformedCiphertext,
                       TransformKey, encapsulate, hybrid_decrypt, hybrid_encrypt,
                       keygen, retrieve, setup, tkgen, transform)
from .access_policy import (LsssMatrix, PolicySyntaxError, ReconstructionCoefficients,
                            evaluate, find_coefficients, parse_policy, to_lsss)
from .content_store import ContentHash, DirectoryStore, MemoryStore, TaskData
from .group_math import (G1Element, G2Element, GtElement, RandomTape, Scalar,
                         pairing, pairing_count)
from .ledger import Ledger, LedgerParams, TaskState
from .proof_system import (ProofBundle, Statement, Witness, preprocess, prove,
                           statement_digest, verify)

__version__ = "0.1.0"
