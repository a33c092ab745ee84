def first_key_config(config):
    config_keys = sorted(config)
    return config_keys.iteritems()
