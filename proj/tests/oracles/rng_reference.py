"""Independent transcription of the counter-based stream generator.

Prints reference outputs used to freeze cross-platform values in test_dist.
"""

M = (1 << 64) - 1


def mix64(z):
    z &= M
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M
    return z ^ (z >> 31)


def fnv1a(text, h=0xCBF29CE484222325):
    for c in text.encode():
        h ^= c
        h = (h * 0x100000001B3) & M
    return h


def stream(seed, key, iteration):
    state = mix64((mix64(mix64(seed ^ 0x6A09E667F3BCC909) ^ fnv1a(key))
                   + mix64(iteration ^ 0xBB67AE8584CAA73B)) & M)
    while True:
        state = (state + 0x9E3779B97F4A7C15) & M
        yield mix64(state)


if __name__ == "__main__":
    s = stream(42, "risk/fraud/current", 17)
    print(f"{next(s)}ull")
    print(f"{next(s)}ull")
    print(f"{next(stream(0, '', 0))}ull")
