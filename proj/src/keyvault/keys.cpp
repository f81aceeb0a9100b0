#include <algorithm>
#include <dpaas/common/codec.hpp>
#include <dpaas/common/random.hpp>
#include <dpaas/keyvault/keys.hpp>

namespace dpaas::keyvault {
    std::string_view to_string(key_state s) noexcept
    {
        switch (s) {
            case key_state::created: return "created";
            case key_state::stored_hot: return "stored_hot";
            case key_state::stored_cold: return "stored_cold";
            case key_state::deleted: return "deleted";
        }
        return "unknown";
    }

    key_pair key_pair::from_seed(const seed_bytes &seed)
    {
        key_pair kp;
        kp._seed = seed;
        kp._sk = expand_signing_key(seed);
        std::copy_n(kp._sk.data() + 32, 32, kp._vk.begin());
        kp._id = key_id_of(kp._vk);
        return kp;
    }

    key_pair key_pair::from_entropy(byte_view entropy)
    {
        return from_seed(seed_bytes { entropy });
    }

    signature key_pair::sign(byte_view message) const
    {
        if (_state == key_state::deleted)
            throw error(errc::deleted_key, to_hex(_id));
        return sign_message(_sk, message);
    }

    key_pair generate_keypair(random_source &rng)
    {
        seed_bytes seed;
        rng.fill({ seed.data(), seed.size() });
        return key_pair::from_seed(seed);
    }

    key_id key_id_of(const verifying_key &vk)
    {
        return sha256(vk);
    }

    seed_bytes derive_sub_seed(const seed_bytes &master_seed, uint64_t index)
    {
        encoder enc;
        enc.raw(master_seed.view()).raw(as_bytes("sub")).u64(index);
        auto buf = enc.take();
        auto d = sha256(buf);
        secure_wipe(buf);
        seed_bytes out { d };
        secure_wipe(d);
        return out;
    }

    key_pair master_key::derive(uint64_t index) const
    {
        if (_key.state() == key_state::deleted)
            throw error(errc::deleted_key, "master key deleted");
        return key_pair::from_seed(derive_sub_seed(_key.seed(), index));
    }

    key_pair master_key::derive_next()
    {
        auto kp = derive(_next_index);
        ++_next_index;
        return kp;
    }
}
