//! Built-in vocabulary rows, grouped by concept in the order the source
//! tables list them. `label` keeps the original heading; `term` is its
//! lower_snake_case identifier.

use super::{Aggregator as A, Concept, Direction as D, TermKind as K, ValueType as V};

pub(super) struct Row {
    pub label: &'static str,
    pub term: &'static str,
    pub value_type: V,
    pub unit: &'static str,
    pub direction: D,
    pub aggregator: A,
    pub kind: K,
    pub aliases: &'static [&'static str],
    pub description: &'static str,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    label: &'static str,
    term: &'static str,
    value_type: V,
    unit: &'static str,
    direction: D,
    aggregator: A,
    kind: K,
    description: &'static str,
) -> Row {
    Row { label, term, value_type, unit, direction, aggregator, kind, aliases: &[], description }
}

const fn aka(mut r: Row, aliases: &'static [&'static str]) -> Row {
    r.aliases = aliases;
    r
}

const DL: &str = "dimensionless";

// Shared rows. Each concept gets its own entry even when the term repeats.

const fn availability(description: &'static str) -> Row {
    row("Availability", "availability", V::Numeric, "percent", D::HigherIsBetter, A::Ratio, K::QosMetric, description)
}

const fn enumerated(label: &'static str, term: &'static str, description: &'static str) -> Row {
    row(label, term, V::Enumerated, DL, D::None, A::None, K::ConfigurationParameter, description)
}

const fn text(label: &'static str, term: &'static str, description: &'static str) -> Row {
    row(label, term, V::Text, DL, D::None, A::None, K::ConfigurationParameter, description)
}

const fn flag(label: &'static str, term: &'static str, description: &'static str) -> Row {
    row(label, term, V::Boolean, DL, D::TargetEquality, A::None, K::ConfigurationParameter, description)
}

const fn capacity(label: &'static str, term: &'static str, unit: &'static str, description: &'static str) -> Row {
    row(label, term, V::Numeric, unit, D::HigherIsBetter, A::Min, K::ConfigurationParameter, description)
}

const fn setting(label: &'static str, term: &'static str, unit: &'static str, description: &'static str) -> Row {
    row(label, term, V::Numeric, unit, D::TargetEquality, A::None, K::ConfigurationParameter, description)
}

const fn delay(label: &'static str, term: &'static str, description: &'static str) -> Row {
    row(label, term, V::Numeric, "time_unit", D::LowerIsBetter, A::Max, K::QosMetric, description)
}

const fn rate_metric(label: &'static str, term: &'static str, unit: &'static str, description: &'static str) -> Row {
    row(label, term, V::Numeric, unit, D::HigherIsBetter, A::Mean, K::QosMetric, description)
}

const DATA_INTEGRITY: Row = row(
    "Data integrity",
    "data_integrity",
    V::Numeric,
    "percent",
    D::HigherIsBetter,
    A::Mean,
    K::QosMetric,
    "Degree to which data has been kept intact rather than altered.",
);

const REPLICATION_FACTOR: Row =
    capacity("Replication factor", "replication_factor", "count", "How many copies of the data are kept.");
const WRITE_CAPACITY: Row =
    capacity("Write capacity", "write_capacity", "bytes", "Amount of data that can be written in one step.");
const READ_CAPACITY: Row =
    capacity("Read capacity", "read_capacity", "bytes", "Amount of data that can be read in one step.");
const TOTAL_QUERIES: Row =
    setting("Total number of queries", "total_number_of_queries", "count", "How many queries are to be considered.");
const COMPRESSION: Row = flag(
    "Data compression support",
    "data_compression_support",
    "Whether data can be compressed and decompressed as required.",
);
const ENCRYPTION: Row = flag(
    "Data encryption support",
    "data_encryption_support",
    "Whether data can be encrypted and decrypted as required.",
);
const MEMORY_CAPACITY: Row =
    capacity("Memory capacity", "memory_capacity", "bytes", "Maximum or minimum amount of memory available.");
const CPU_CAPACITY: Row = capacity(
    "CPU capacity",
    "cpu_capacity",
    "Hz",
    "Processor capability and speed: operations it can perform per unit of time.",
);
const NUMBER_OF_DEVICES: Row =
    setting("Number of devices", "number_of_devices", "count", "How many devices are involved.");
const MOBILITY: Row = enumerated(
    "Mobility of devices",
    "mobility_of_devices",
    "Whether a device is fixed or mobile, which affects network coverage.",
);
const COMM_MECHANISM: Row = enumerated(
    "Communication mechanism",
    "communication_mechanism",
    "Push or pull of data to or from the next layer, in hardware, software or both.",
);
const COMM_TECHNOLOGY: Row = enumerated(
    "Communication technology",
    "communication_technology",
    "Supported communication protocol with other devices, e.g. WiFi or Bluetooth.",
);
const DATA_IN_RATE: Row = row(
    "Data-in rate",
    "data_in_rate",
    V::Numeric,
    "bytes_per_s",
    D::HigherIsBetter,
    A::Mean,
    K::ConfigurationParameter,
    "Amount of incoming data per time unit.",
);
const DATA_OUT_RATE: Row = row(
    "Data-out rate",
    "data_out_rate",
    V::Numeric,
    "bytes_per_s",
    D::HigherIsBetter,
    A::Mean,
    K::ConfigurationParameter,
    "Amount of outgoing data per time unit.",
);
const PUBLISHING_RATE: Row = row(
    "Publishing rate",
    "publishing_rate",
    V::Numeric,
    "Hz",
    D::TargetEquality,
    A::Mean,
    K::ConfigurationParameter,
    "Rate at which data is sent onwards, e.g. to a message broker.",
);

pub(super) const IOT_DEVICE: &[Row] = &[
    row(
        "Device accuracy",
        "device_accuracy",
        V::Numeric,
        "percent",
        D::HigherIsBetter,
        A::Mean,
        K::QosMetric,
        "How well the device reflects an event of interest.",
    ),
    row(
        "Device precision",
        "device_precision",
        V::Numeric,
        "percent",
        D::HigherIsBetter,
        A::Mean,
        K::QosMetric,
        "How consistently the device reads an event of interest.",
    ),
    enumerated("Type of device", "type_of_device", "Kind of device, e.g. sensor or RFID tag."),
    NUMBER_OF_DEVICES,
    MOBILITY,
    COMM_MECHANISM,
    COMM_TECHNOLOGY,
    row(
        "Battery life",
        "battery_life",
        V::Numeric,
        "h",
        D::HigherIsBetter,
        A::Min,
        K::QosMetric,
        "Battery performance and longevity, e.g. run time on a full charge.",
    ),
    capacity(
        "Warranty period",
        "warranty_period",
        "day",
        "Period during which a purchased device may be returned or exchanged.",
    ),
    capacity("Storage size", "storage_size", "bytes", "Storage available on the device for keeping data."),
    MEMORY_CAPACITY,
    CPU_CAPACITY,
];

pub(super) const EDGE_RESOURCE: &[Row] = &[
    availability("Fraction of run time the edge resource functions as expected and is ready for use."),
    enumerated("Type of device", "type_of_device", "Kind of edge device, e.g. mobile, Raspberry Pi or server."),
    rate_metric(
        "Gateway throughput",
        "gateway_throughput",
        "bytes_per_s",
        "Data transferred through the gateway per second.",
    ),
    delay("Gateway delay", "gateway_delay", "Delay in collecting data from nodes."),
    PUBLISHING_RATE,
    NUMBER_OF_DEVICES,
    MOBILITY,
    COMM_MECHANISM,
    COMM_TECHNOLOGY,
    aka(
        capacity(
            "Storage/buffer size",
            "storage_buffer_size",
            "bytes",
            "Buffer or storage for incoming data, or for data awaiting delivery confirmation.",
        ),
        &["buffer_size"],
    ),
    MEMORY_CAPACITY,
    CPU_CAPACITY,
];

pub(super) const CLOUD_RESOURCE: &[Row] = &[
    availability("Fraction of run time the cloud resource functions as expected and is ready for use."),
    aka(
        row(
            "CPU utilization",
            "cpu_utilization",
            V::Numeric,
            "percent",
            D::HigherIsBetter,
            A::Mean,
            K::QosMetric,
            "Percentage of the CPU being utilised.",
        ),
        &["cpu_utilisation"],
    ),
    row(
        "Outage length",
        "outage_length",
        V::Numeric,
        "time_unit",
        D::LowerIsBetter,
        A::Max,
        K::QosMetric,
        "Duration for which the resource is unavailable.",
    ),
    rate_metric("Throughput", "throughput", "bytes_per_s", "Data transfer rate to and from the resource per second."),
    capacity("Storage size", "storage_size", "bytes", "Disk space available for data storage."),
    rate_metric(
        "Storage bandwidth",
        "storage_bandwidth",
        "bytes_per_s",
        "Capacity to move data between a service and storage.",
    ),
    enumerated("Storage type", "storage_type", "Type of storage, e.g. local SSD or local HDD."),
    aka(
        capacity(
            "Input/output storage operations",
            "input_output_storage_operations",
            "Hz",
            "Specified number of storage input/output operations.",
        ),
        &["iops"],
    ),
    enumerated("Access protocols", "access_protocols", "Protocols used to access the cloud resource."),
    MEMORY_CAPACITY,
    rate_metric("Network bandwidth", "network_bandwidth", "bytes_per_s", "Network speed among internal service nodes."),
    capacity("vCPU capacity", "vcpu_capacity", "Hz", "Operations a single vCPU can perform per unit of time."),
    aka(capacity("No. of vCPUs", "num_vcpus", "count", "Number of vCPUs per VM."), &["no_of_vcpus", "number_of_vcpus"]),
    aka(
        capacity("No. of cores per VM", "num_cores_per_vm", "count", "Number of cores per VM."),
        &["no_of_cores_per_vm"],
    ),
    setting(
        "Vertical scale-down limit",
        "vertical_scale_down_limit",
        "count",
        "Minimum number of CPUs when scaling is manual.",
    ),
    setting(
        "Vertical scale-up limit",
        "vertical_scale_up_limit",
        "count",
        "Maximum number of CPUs when scaling is manual.",
    ),
    setting(
        "Horizontal scale-up limit",
        "horizontal_scale_up_limit",
        "count",
        "Maximum number of VMs when scaling is manual.",
    ),
    setting(
        "Horizontal scale-down limit",
        "horizontal_scale_down_limit",
        "count",
        "Minimum number of VMs when scaling is manual.",
    ),
    REPLICATION_FACTOR,
];

pub(super) const SENSING: &[Row] = &[
    availability("Fraction of run time the sensing service functions as expected."),
    delay("Data freshness", "data_freshness", "Age of sensor data, since data cannot always be sent in real time."),
    aka(
        row(
            "Sampling rate",
            "sampling_rate",
            V::Numeric,
            "Hz",
            D::HigherIsBetter,
            A::Mean,
            K::ConfigurationParameter,
            "Rate at which a sensor measures an observed phenomenon, e.g. 5 Hz.",
        ),
        &["sampling_frequency"],
    ),
    row(
        "Data accuracy",
        "data_accuracy",
        V::Numeric,
        "percent",
        D::LowerIsBetter,
        A::Mean,
        K::QosMetric,
        "Error rate of the data, e.g. average number of errors over a period.",
    ),
    DATA_INTEGRITY,
    text("Data type", "data_type", "What is captured, e.g. weather temperature or humidity."),
];

pub(super) const NETWORKING: &[Row] = &[
    availability("Fraction of the period the network is fully operational and ready for use."),
    rate_metric("Link bandwidth", "link_bandwidth", "bytes_per_s", "Maximum data that can cross a link per second."),
    delay("Network delay", "network_delay", "Delay in data transmission."),
    DATA_IN_RATE,
    DATA_OUT_RATE,
    row(
        "Jitter",
        "jitter",
        V::Numeric,
        "ms",
        D::LowerIsBetter,
        A::Max,
        K::QosMetric,
        "Variance of the time delay between data packets, in milliseconds.",
    ),
    aka(
        row(
            "Packet loss rate",
            "packet_loss_rate",
            V::Numeric,
            "percent",
            D::LowerIsBetter,
            A::Ratio,
            K::QosMetric,
            "Packets lost relative to the total number of packets sent.",
        ),
        &["packet_loss_ratio"],
    ),
    DATA_INTEGRITY,
];

pub(super) const INGESTION: &[Row] = &[
    availability("Fraction of the period the ingestion service functions as expected."),
    rate_metric(
        "Throughput",
        "throughput",
        "bytes_per_s",
        "Data transferred through the messaging platform per second.",
    ),
    delay(
        "Latency",
        "latency",
        "Time to process one input/output transaction before forwarding it to its destination.",
    ),
    DATA_IN_RATE,
    DATA_OUT_RATE,
    capacity(
        "Data retention time limit",
        "data_retention_time_limit",
        "h",
        "How long data may be kept in the ingestion layer.",
    ),
    PUBLISHING_RATE,
    capacity(
        "Storage size",
        "storage_size",
        "bytes",
        "Storage for buffering incoming data, unconfirmed deliveries or retained data.",
    ),
    REPLICATION_FACTOR,
    COMPRESSION,
    ENCRYPTION,
    enumerated(
        "Delivery guarantee mechanism",
        "delivery_guarantee_mechanism",
        "How delivery to the destination is assured, e.g. at-most-once or at-least-once.",
    ),
    DATA_INTEGRITY,
    text(
        "Name of ingestion framework",
        "name_of_ingestion_framework",
        "Ingestion product in use, e.g. RabbitMQ, Kinesis Data Firehose, Flume, Scribe.",
    ),
];

pub(super) const STREAM_PROCESSING: &[Row] = &[
    rate_metric("Throughput", "throughput", "bytes_per_s", "Stream volume processed per second."),
    delay("Latency", "latency", "Time to process one input/output transaction in the stream processor."),
    row(
        "Data completeness",
        "data_completeness",
        V::Numeric,
        "percent",
        D::HigherIsBetter,
        A::Mean,
        K::QosMetric,
        "Percentage of incoming stream data used to compute query results.",
    ),
    row(
        "Miss ratio",
        "miss_ratio",
        V::Numeric,
        "percent",
        D::LowerIsBetter,
        A::Ratio,
        K::QosMetric,
        "Percentage of queries not finished within their deadlines.",
    ),
    setting("Time-based window size", "time_based_window_size", "time_unit", "Window length measured in time."),
    setting(
        "Event-based window size",
        "event_based_window_size",
        "count",
        "Window length measured in events, records or messages.",
    ),
    setting(
        "Sliding window",
        "sliding_window",
        "time_unit",
        "Window length and slide step; successive windows may overlap.",
    ),
    setting(
        "Tumbling window",
        "tumbling_window",
        "time_unit",
        "Length of fixed-size, non-overlapping, contiguous windows.",
    ),
    setting("Micro batch size", "micro_batch_size", "bytes", "Data buffered before a micro-batch is processed."),
    setting("Data arrival rate", "data_arrival_rate", "Hz", "Data points expected per second."),
    WRITE_CAPACITY,
    READ_CAPACITY,
    REPLICATION_FACTOR,
    TOTAL_QUERIES,
    COMPRESSION,
    ENCRYPTION,
    DATA_INTEGRITY,
    text(
        "Name of stream processing framework",
        "name_of_stream_processing_framework",
        "Stream processor in use, e.g. Spark Streaming or Apache Storm.",
    ),
];

pub(super) const BATCH_PROCESSING: &[Row] = &[
    rate_metric("Throughput", "throughput", "Hz", "Batches processed per second."),
    delay("Response time", "response_time", "Time to process a submitted job and receive a response."),
    setting("Batch size", "batch_size", "bytes", "Size limit of each submitted batch."),
    aka(
        setting("No. of batch jobs", "num_batch_jobs", "count", "Number of submitted batch jobs."),
        &["no_of_batch_jobs"],
    ),
    setting(
        "Process running frequency",
        "process_running_frequency",
        "per_hour",
        "How often the process runs, e.g. twice per hour.",
    ),
    capacity("Max. memory of the map task", "max_memory_of_map_task", "bytes", "Memory assigned to each map task."),
    capacity(
        "Max. memory of the reduce task",
        "max_memory_of_reduce_task",
        "bytes",
        "Memory assigned to each reduce task.",
    ),
    aka(setting("No. of mappers", "num_mappers", "count", "Number of mappers."), &["no_of_mappers"]),
    aka(setting("No. of reducers", "num_reducers", "count", "Number of reducers."), &["no_of_reducers"]),
    WRITE_CAPACITY,
    READ_CAPACITY,
    REPLICATION_FACTOR,
    TOTAL_QUERIES,
    COMPRESSION,
    ENCRYPTION,
    DATA_INTEGRITY,
    text(
        "Name of batch processing framework",
        "name_of_batch_processing_framework",
        "Batch framework in use, e.g. Hadoop.",
    ),
];

pub(super) const MACHINE_LEARNING: &[Row] = &[
    rate_metric("Accuracy", "accuracy", "percent", "Accuracy of the analysis."),
    enumerated(
        "Class of ML",
        "class_of_ml",
        "Class the algorithm belongs to, e.g. classification, regression, clustering.",
    ),
    enumerated(
        "Name of ML algorithm",
        "name_of_ml_algorithm",
        "Required algorithm, e.g. logistic regression, K-means, naive Bayes.",
    ),
    enumerated(
        "Way to run the ML algorithm",
        "way_to_run_ml_algorithm",
        "Execution style, e.g. sequential or MapReduce.",
    ),
    DATA_INTEGRITY,
];

pub(super) const DATABASE: &[Row] = &[
    rate_metric("Throughput", "throughput", "Hz", "Queries processed per second."),
    delay("Response time", "response_time", "Time from sending a request to receiving its response."),
    enumerated("Type of database", "type_of_database", "Database family, e.g. SQL or NoSQL."),
    enumerated("Type of NoSQL", "type_of_nosql", "NoSQL model, e.g. key-value, document, graph or column store."),
    row(
        "Read error rate",
        "read_error_rate",
        V::Numeric,
        "Hz",
        D::LowerIsBetter,
        A::Ratio,
        K::QosMetric,
        "Errors on read attempts per second.",
    ),
    row(
        "Cache hit ratio",
        "cache_hit_ratio",
        V::Numeric,
        "percent",
        D::HigherIsBetter,
        A::Ratio,
        K::QosMetric,
        "Cache hits relative to misses, as a percentage.",
    ),
    row(
        "Write error rate",
        "write_error_rate",
        V::Numeric,
        "Hz",
        D::LowerIsBetter,
        A::Ratio,
        K::QosMetric,
        "Errors on write attempts per second.",
    ),
    WRITE_CAPACITY,
    READ_CAPACITY,
    REPLICATION_FACTOR,
    flag("Compression support", "compression_support", "Whether data can be compressed and decompressed as required."),
    ENCRYPTION,
    DATA_INTEGRITY,
];

/// Terms an application-level SLO may constrain.
pub(super) const APPLICATION: &[Row] = &[
    delay(
        "End-to-end response time",
        "end_to_end_response_time",
        "Time from capturing an event to the application's response, across all activities.",
    ),
    availability("Fraction of run time the whole application is functioning."),
    rate_metric("Accuracy", "accuracy", "percent", "Accuracy of the application's decisions."),
];

pub(super) fn rows() -> [(Concept, &'static [Row]); 10] {
    [
        (Concept::IotDevice, IOT_DEVICE),
        (Concept::EdgeResource, EDGE_RESOURCE),
        (Concept::CloudResource, CLOUD_RESOURCE),
        (Concept::Sensing, SENSING),
        (Concept::Networking, NETWORKING),
        (Concept::Ingestion, INGESTION),
        (Concept::StreamProcessing, STREAM_PROCESSING),
        (Concept::BatchProcessing, BATCH_PROCESSING),
        (Concept::MachineLearning, MACHINE_LEARNING),
        (Concept::Database, DATABASE),
    ]
}
