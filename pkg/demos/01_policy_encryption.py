"""Encrypt a message under a boolean attribute policy and decrypt it locally.

Walks the key-encapsulation path without any outsourcing: the key holder
runs transform and retrieve itself.
"""

from poabe import (RandomTape, find_coefficients, hybrid_decrypt, hybrid_encrypt,
                   keygen, retrieve, setup, tkgen, transform)
from poabe.access_policy import parse_policy

tape = RandomTape.from_int(42)

pk, msk = setup(tape)
print("system keys generated")

policy = parse_policy("doctor AND (cardiology OR research)")
message = b"patient record 1274: trial cohort B"
package = hybrid_encrypt(pk, policy, message, tape)
print(f"encrypted {len(message)} bytes under: doctor AND (cardiology OR research)")

sk = keygen(pk, msk, {"doctor", "research"}, tape)
print("issued key for attributes {doctor, research}")

tk, rk = tkgen(sk, tape)
w = find_coefficients(package.ct.policy, tk.attrs)
partial = transform(tk, package.ct, w)
recovered = hybrid_decrypt(package, retrieve(partial, rk))
print("decrypted:", recovered.decode())
assert recovered == message

sk_nurse = keygen(pk, msk, {"nurse"}, tape)
tk_nurse, _ = tkgen(sk_nurse, tape)
assert find_coefficients(package.ct.policy, tk_nurse.attrs) is None
print("key for {nurse} cannot satisfy the policy, as expected")
