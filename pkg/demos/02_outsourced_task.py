"""Outsource the heavy pairing work to a server via the content store.

The data user publishes (ciphertext, transform key, coefficients) as one
content-addressed blob, the server computes the partial decryption T,
and the user finishes with a single exponentiation.  The blinding scalar
z never leaves the user, so the server learns nothing about the payload.
"""

from poabe import (ContentHash, MemoryStore, RandomTape, TaskData,
                   find_coefficients, hybrid_decrypt, hybrid_encrypt, keygen,
                   retrieve, setup, tkgen, transform)
from poabe.abe_core import TransformedCiphertext
from poabe.access_policy import parse_policy
from poabe.encoding import canonical_decode, canonical_encode

tape = RandomTape.from_int(7)
pk, msk = setup(tape)
sk = keygen(pk, msk, {"subscriber", "eu"}, tape)

package = hybrid_encrypt(pk, parse_policy("subscriber AND eu"),
                         b"premium content", tape)

# user side: blind the key, publish the task data, keep z private
tk, rk = tkgen(sk, tape)
w = find_coefficients(package.ct.policy, tk.attrs)
store = MemoryStore()
blob = canonical_encode(TaskData(package.ct, tk, w))
data_hash = store.put(blob)
print(f"published {len(blob)} bytes of task data as {data_hash.hex[:16]}...")

# server side: everything it needs is public
task = canonical_decode(TaskData, store.get(data_hash))
partial = transform(task.tk, task.ct, task.w)
print("server computed the partial decryption")

# user side: one exponentiation finishes the job
recovered = hybrid_decrypt(package, retrieve(
    TransformedCiphertext(package.ct.c, partial.t), rk))
print("user recovered:", recovered.decode())
assert recovered == b"premium content"
